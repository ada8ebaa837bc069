#include "grmssvdd/preprocessing.hpp"

#include <algorithm>
#include <cmath>

#include "grmssvdd/rng.hpp"

namespace grmssvdd {

namespace {

// Channel indices of modality m, in increasing channel order.
std::vector<int> channels_of_modality(const EventSeries& event, int m) {
    std::vector<int> out;
    for (int c = 0; c < event.n_channels(); ++c) {
        if (event.modality_of_channel[c] == m) out.push_back(c);
    }
    return out;
}

// Window of w timesteps ending at index end, flattened channel-major per modality.
MultimodalInstance make_window(const EventSeries& event,
                               const std::vector<std::vector<int>>& modality_channels, int w,
                               int end, int label) {
    MultimodalInstance inst;
    inst.label = label;
    inst.source_event = event.id;
    inst.end_time = event.timestamps[end];
    const int start = end - w + 1;
    inst.vectors_per_modality.reserve(modality_channels.size());
    for (const auto& chans : modality_channels) {
        Vector v(static_cast<int>(chans.size()) * w);
        int pos = 0;
        for (int c : chans) {
            for (int t = start; t <= end; ++t) v[pos++] = event.channels(c, t);
        }
        inst.vectors_per_modality.push_back(std::move(v));
    }
    return inst;
}

std::vector<std::vector<int>> group_channels(const EventSeries& event) {
    std::vector<std::vector<int>> grouped;
    const int M = event.modality_count();
    grouped.reserve(M);
    for (int m = 0; m < M; ++m) grouped.push_back(channels_of_modality(event, m));
    return grouped;
}

void check_window(const EventSeries& event, const WindowSpec& spec) {
    event.validate();
    if (spec.w < 1) throw InvalidInput("window length must be >= 1");
    if (spec.w > event.n_timesteps())
        throw InvalidInput("window length exceeds series length for event '" + event.id + "'");
}

}  // namespace

std::vector<MultimodalInstance> extract_reliability_instances(const EventSeries& event,
                                                              const WindowSpec& spec) {
    check_window(event, spec);
    const auto grouped = group_channels(event);
    const auto& t = event.timestamps;
    const int n = event.n_timesteps();
    const int w = spec.w;

    // First/last sample index inside [tau1, tau2]; the range may be empty.
    const auto first_it = std::lower_bound(t.begin(), t.end(), event.tau1);
    int i1 = static_cast<int>(first_it - t.begin());
    const auto past_it = std::upper_bound(t.begin(), t.end(), event.tau2);
    int i2 = static_cast<int>(past_it - t.begin()) - 1;

    std::vector<MultimodalInstance> out;

    // Negative ending at the last timestep strictly before tau1. Needs at
    // least w timesteps before the event.
    const int pre_end = i1 - 1;
    if (pre_end >= w - 1) out.push_back(make_window(event, grouped, w, pre_end, 0));

    // Positive at the midpoint of the in-event range, pushed right when the
    // window would not have enough history.
    if (i1 <= i2) {
        int pos_end = std::max((i1 + i2) / 2, w - 1);
        if (pos_end <= i2) out.push_back(make_window(event, grouped, w, pos_end, 1));
    }

    // Negative at the series end, only when the event does not continue
    // until the end of the time series.
    if (event.tau2 < t[n - 1]) out.push_back(make_window(event, grouped, w, n - 1, 0));

    return out;
}

std::vector<MultimodalInstance> extract_rolling_instances(const EventSeries& event,
                                                          const WindowSpec& spec) {
    check_window(event, spec);
    const auto grouped = group_channels(event);
    const int w = spec.w;

    std::vector<MultimodalInstance> out;
    out.reserve(event.n_timesteps() - w + 1);
    for (int end = w - 1; end < event.n_timesteps(); ++end) {
        const double T = event.timestamps[end];
        const int label = (event.tau1 <= T && T <= event.tau2) ? 1 : 0;
        out.push_back(make_window(event, grouped, w, end, label));
    }
    return out;
}

std::vector<double> per_channel_std(const MultimodalDataset& dataset, int w) {
    if (w < 1) throw InvalidInput("per_channel_std: window length must be >= 1");
    std::vector<double> stds;
    for (int m = 0; m < dataset.M; ++m) {
        if (dataset.D[m] % w != 0)
            throw ShapeMismatch("per_channel_std: D_m not a multiple of window length");
        const int n_channels = dataset.D[m] / w;
        for (int c = 0; c < n_channels; ++c) {
            double sum = 0.0, sq = 0.0;
            const double count = static_cast<double>(dataset.size()) * w;
            for (const auto& inst : dataset.instances) {
                for (int k = 0; k < w; ++k) {
                    const double x = inst.vectors_per_modality[m][c * w + k];
                    sum += x;
                    sq += x * x;
                }
            }
            const double mean = sum / count;
            stds.push_back(std::sqrt(std::max(0.0, sq / count - mean * mean)));
        }
    }
    return stds;
}

MultimodalDataset inject_noise(const MultimodalDataset& dataset, double noise_factor,
                               const std::vector<double>& channel_std, int w,
                               std::uint64_t seed) {
    if (noise_factor < 0.0) throw InvalidInput("inject_noise: negative noise factor");
    if (noise_factor == 0.0) return dataset;

    int total_channels = 0;
    for (int m = 0; m < dataset.M; ++m) {
        if (dataset.D[m] % w != 0)
            throw ShapeMismatch("inject_noise: D_m not a multiple of window length");
        total_channels += dataset.D[m] / w;
    }
    if (static_cast<int>(channel_std.size()) != total_channels)
        throw ShapeMismatch("inject_noise: channel_std size mismatch");
    for (double s : channel_std) {
        if (s < 0.0) throw InvalidInput("inject_noise: negative channel std");
    }

    MultimodalDataset out = dataset;
    Rng rng(seed);
    for (auto& inst : out.instances) {
        int channel_base = 0;
        for (int m = 0; m < out.M; ++m) {
            const int n_channels = out.D[m] / w;
            for (int c = 0; c < n_channels; ++c) {
                const double sd = noise_factor * channel_std[channel_base + c];
                for (int k = 0; k < w; ++k) {
                    inst.vectors_per_modality[m][c * w + k] += sd * rng.normal();
                }
            }
            channel_base += n_channels;
        }
    }
    return out;
}

double PcaModel::explained_variance_ratio() const {
    if (total_variance <= 0.0) return 0.0;
    return eigenvalues.sum() / total_variance;
}

PcaModel fit_pca_matrix(const Matrix& X, int n_components) {
    const int D = static_cast<int>(X.rows());
    const int N = static_cast<int>(X.cols());
    if (n_components < 1 || n_components > std::min(D, N))
        throw InvalidInput("fit_pca_matrix: n_components must be in [1, min(D, N)]");

    PcaModel model;
    model.n_components = n_components;
    model.mean = X.rowwise().mean();
    const Matrix centered = X.colwise() - model.mean;
    const Matrix cov = centered * centered.transpose() / static_cast<double>(N);

    Eigen::SelfAdjointEigenSolver<Matrix> eigen(cov);
    if (eigen.info() != Eigen::Success) throw DegenerateData("fit_pca_matrix: eigensolver failed");

    // Eigen returns ascending eigenvalues; take the top ones in descending order.
    model.components = Matrix(n_components, D);
    model.eigenvalues = Vector(n_components);
    double total = 0.0;
    for (int i = 0; i < D; ++i) total += std::max(0.0, eigen.eigenvalues()[i]);
    model.total_variance = total;

    for (int r = 0; r < n_components; ++r) {
        const int src = D - 1 - r;
        Vector component = eigen.eigenvectors().col(src);
        // Deterministic orientation: largest-magnitude entry positive.
        int pivot = 0;
        for (int i = 1; i < D; ++i) {
            if (std::abs(component[i]) > std::abs(component[pivot])) pivot = i;
        }
        if (component[pivot] < 0.0) component = -component;
        model.components.row(r) = component.transpose();
        model.eigenvalues[r] = std::max(0.0, eigen.eigenvalues()[src]);
    }
    return model;
}

std::vector<PcaModel> fit_pca(const MultimodalDataset& train, int n_components) {
    std::vector<PcaModel> models;
    models.reserve(train.M);
    for (int m = 0; m < train.M; ++m) {
        if (n_components > std::min(train.D[m], train.size()))
            throw InvalidInput("fit_pca: n_components exceeds min(D_m, N_train) for modality " +
                               std::to_string(m));
        models.push_back(fit_pca_matrix(modality_matrix(train, m), n_components));
    }
    return models;
}

Vector apply_pca(const PcaModel& model, const Vector& input) {
    if (input.size() != model.mean.size())
        throw ShapeMismatch("apply_pca: input length != D_raw");
    return model.components * (input - model.mean);
}

MultimodalDataset apply_pca(const std::vector<PcaModel>& models,
                            const MultimodalDataset& dataset) {
    if (static_cast<int>(models.size()) != dataset.M)
        throw ShapeMismatch("apply_pca: one PcaModel per modality required");
    MultimodalDataset out;
    out.M = dataset.M;
    out.D.resize(dataset.M);
    for (int m = 0; m < dataset.M; ++m) out.D[m] = models[m].n_components;
    out.instances.reserve(dataset.instances.size());
    for (const auto& inst : dataset.instances) {
        MultimodalInstance reduced = inst;
        for (int m = 0; m < dataset.M; ++m) {
            reduced.vectors_per_modality[m] = apply_pca(models[m], inst.vectors_per_modality[m]);
        }
        out.instances.push_back(std::move(reduced));
    }
    return out;
}

NormalizedSplit fit_apply_normalization(const MultimodalDataset& train,
                                        const MultimodalDataset& test) {
    if (test.size() > 0 && (test.M != train.M || test.D != train.D))
        throw ShapeMismatch("fit_apply_normalization: train/test shape mismatch");

    NormalizedSplit out;
    out.train = train;
    out.test = test;
    out.stats.resize(train.M);

    for (int m = 0; m < train.M; ++m) {
        double sum = 0.0, sq = 0.0;
        const double count = static_cast<double>(train.size()) * train.D[m];
        for (const auto& inst : train.instances) {
            sum += inst.vectors_per_modality[m].sum();
            sq += inst.vectors_per_modality[m].squaredNorm();
        }
        const double mean = sum / count;
        const double var = std::max(0.0, sq / count - mean * mean);
        const double sd = std::sqrt(var);
        if (!(sd > 0.0))
            throw DegenerateData("fit_apply_normalization: zero training std in modality " +
                                 std::to_string(m));
        out.stats[m] = NormalizationStats{mean, sd};

        for (auto& inst : out.train.instances) {
            inst.vectors_per_modality[m] =
                apply_normalization(out.stats[m], inst.vectors_per_modality[m]);
        }
        for (auto& inst : out.test.instances) {
            inst.vectors_per_modality[m] =
                apply_normalization(out.stats[m], inst.vectors_per_modality[m]);
        }
    }
    return out;
}

Vector apply_normalization(const NormalizationStats& stats, const Vector& input) {
    return (input.array() - stats.mean) / stats.stddev;
}

}  // namespace grmssvdd
