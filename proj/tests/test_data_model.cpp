#include <doctest.h>

#include <grmssvdd/data_model.hpp>

#include <algorithm>
#include <set>

#include "test_util.hpp"

using namespace grmssvdd;
using testing::make_event;

namespace {

std::vector<EventSeries> ten_events() {
    std::vector<EventSeries> events;
    for (int i = 0; i < 10; ++i)
        events.push_back(make_event("ev" + std::to_string(i), {2, 3}, 30, 0.5, 5.0, 9.0));
    return events;
}

MultimodalInstance instance_with(const std::vector<int>& D, int label, double fill) {
    MultimodalInstance inst;
    inst.label = label;
    for (int d : D) inst.vectors_per_modality.push_back(Vector::Constant(d, fill));
    return inst;
}

}  // namespace

TEST_CASE("split is a deterministic per-event partition") {
    const auto events = ten_events();
    auto [train, test] = split_train_test(events, 0.7, 42);
    CHECK(train.size() == 7);
    CHECK(test.size() == 3);

    std::multiset<std::string> seen;
    for (const auto& e : train) seen.insert(e.id);
    for (const auto& e : test) seen.insert(e.id);
    std::multiset<std::string> expected;
    for (const auto& e : events) expected.insert(e.id);
    CHECK(seen == expected);

    auto [train2, test2] = split_train_test(events, 0.7, 42);
    REQUIRE(train2.size() == train.size());
    for (std::size_t i = 0; i < train.size(); ++i) CHECK(train2[i].id == train[i].id);
    for (std::size_t i = 0; i < test.size(); ++i) CHECK(test2[i].id == test[i].id);

    auto [other, other_test] = split_train_test(events, 0.7, 43);
    (void)other_test;
    CHECK(other.size() == 7);
}

TEST_CASE("split handles degenerate fraction and empty input") {
    std::vector<EventSeries> one = {make_event("only", {1}, 20, 1.0, 4.0, 8.0)};
    auto [train, test] = split_train_test(one, 1.0, 0);
    CHECK(train.size() == 1);
    CHECK(test.empty());
    CHECK_THROWS_AS(split_train_test({}, 0.7, 0), InvalidInput);
}

TEST_CASE("split partitions for many seeds and fractions") {
    const auto events = ten_events();
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
        for (double f : {0.1, 0.5, 0.9, 1.0}) {
            auto [train, test] = split_train_test(events, f, seed);
            CHECK(train.size() == static_cast<std::size_t>(10 * f));
            CHECK(train.size() + test.size() == events.size());
            std::set<std::string> train_ids, test_ids;
            for (const auto& e : train) train_ids.insert(e.id);
            for (const auto& e : test) test_ids.insert(e.id);
            for (const auto& id : test_ids) CHECK(train_ids.count(id) == 0);
        }
    }
}

TEST_CASE("assemble_dataset keeps order and checks shapes") {
    std::vector<MultimodalInstance> instances;
    for (int i = 0; i < 3; ++i) instances.push_back(instance_with({30, 30, 30}, 1, i));
    auto ds = assemble_dataset(instances);
    CHECK(ds.size() == 3);
    CHECK(ds.M == 3);
    CHECK(ds.D == std::vector<int>{30, 30, 30});
    CHECK(ds.instances[2].vectors_per_modality[0][0] == doctest::Approx(2.0));

    CHECK_THROWS_AS(assemble_dataset({}), InvalidInput);

    std::vector<MultimodalInstance> mixed = {instance_with({2, 2}, 1, 0.0),
                                             instance_with({2, 3}, 1, 0.0)};
    CHECK_THROWS_AS(assemble_dataset(mixed), ShapeMismatch);
}

TEST_CASE("filter_by_label preserves order") {
    std::vector<MultimodalInstance> instances;
    for (int i = 0; i < 6; ++i) instances.push_back(instance_with({4}, i % 2, i));
    auto ds = assemble_dataset(instances);
    auto pos = filter_by_label(ds, 1);
    REQUIRE(pos.size() == 3);
    CHECK(pos.instances[0].vectors_per_modality[0][0] == doctest::Approx(1.0));
    CHECK(pos.instances[2].vectors_per_modality[0][0] == doctest::Approx(5.0));
}

TEST_CASE("modality_matrix lays instances out as columns") {
    grmssvdd::Rng rng(3);
    auto ds = testing::random_dataset(2, {3, 5}, 4, rng);
    Matrix X1 = modality_matrix(ds, 1);
    REQUIRE(X1.rows() == 5);
    REQUIRE(X1.cols() == 4);
    for (int i = 0; i < 4; ++i)
        CHECK((X1.col(i) - ds.instances[static_cast<std::size_t>(i)].vectors_per_modality[1])
                  .lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("shuffle_dataset is a seeded permutation") {
    grmssvdd::Rng rng(5);
    auto ds = testing::random_dataset(1, {2}, 8, rng);
    std::vector<double> before;
    for (const auto& inst : ds.instances) before.push_back(inst.end_time);

    auto a = ds;
    auto b = ds;
    shuffle_dataset(a, 17);
    shuffle_dataset(b, 17);
    for (int i = 0; i < a.size(); ++i)
        CHECK(a.instances[static_cast<std::size_t>(i)].end_time ==
              b.instances[static_cast<std::size_t>(i)].end_time);

    std::vector<double> after;
    for (const auto& inst : a.instances) after.push_back(inst.end_time);
    std::sort(after.begin(), after.end());
    std::sort(before.begin(), before.end());
    CHECK(after == before);
}

TEST_CASE("EventSeries validation rejects bad annotations") {
    auto good = make_event("ok", {2}, 20, 0.5, 2.0, 5.0);
    CHECK_NOTHROW(good.validate());

    auto late = good;
    late.tau2 = 100.0;
    CHECK_THROWS_AS(late.validate(), InvalidInput);

    auto swapped = good;
    swapped.tau1 = 6.0;
    swapped.tau2 = 5.0;
    CHECK_THROWS_AS(swapped.validate(), InvalidInput);

    auto jitter = good;
    jitter.timestamps[10] += 0.2;
    CHECK_THROWS_AS(jitter.validate(), InvalidInput);

    auto bad_modality = good;
    bad_modality.modality_of_channel[1] = 5;
    CHECK_THROWS_AS(bad_modality.validate(), InvalidInput);
}
