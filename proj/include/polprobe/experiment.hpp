// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "polprobe/linksim.hpp"
#include "polprobe/metrics.hpp"
#include "polprobe/sequences.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace polprobe {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat key = value configuration shared by every experiment runner.
struct ExperimentConfig {
    std::vector<Scheme> schemes{Scheme::GolayBpsk, Scheme::Cazac, Scheme::Sweep};
    std::size_t period = 1024;     // symbols per probing period
    std::size_t tf_period = 4096;  // period used for time-frequency signatures
    double symbol_rate = 50e6;     // Hz
    double fiber_speed = 2e8;      // m/s
    std::vector<double> lengths{512.0, 1600.0};
    double alpha_db_km = 0.2;
    double awgn_sigma = 0.0;
    double linewidth_hz = 10.0;  // used by the phase-noise variant of error curves
    std::vector<std::uint64_t> seeds{1, 2, 3};
    std::string output_dir = "out";
    std::size_t curve_points = 20;  // error curve sampled every 1/curve_points of the longest length
    std::vector<double> curve_extra{508.0, 510.0, 512.0, 514.0, 516.0, 1020.0, 1022.0, 1024.0, 1026.0, 1028.0};
    std::size_t workers = 0;  // 0 = hardware concurrency
};

ExperimentConfig desk_preset();
// 50 Mbaud, 2^14-symbol periods, 20 km reference fiber.
ExperimentConfig field_preset();
ExperimentConfig preset(const std::string& name);

// Applies `key = value` lines on top of base. '#' starts a comment.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});
void apply_override(ExperimentConfig& cfg, std::string_view key_value);
void validate(const ExperimentConfig& cfg);

// Canonical key = value rendering; parse_config(to_text(c)) == c.
std::string to_text(const ExperimentConfig& cfg);

struct RunSummary {
    std::string experiment;
    std::vector<std::filesystem::path> files;
};

// Runs fn(0..count-1) on a bounded pool; fn must only touch its own slot.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

struct PortionError {
    double det_rel_error = 0.0;
    double phase_error = 0.0;
    std::size_t taps = 0;      // segments in the probed portion
    std::size_t compared = 0;  // segments actually compared (bounded by the receiver window)
};

// Probes the first `taps` segments of ref with one scheme and averages the
// per-segment errors over the whole portion.
PortionError evaluate_portion(const DualPolSequence& probe, const ChannelRealization& ref, std::size_t taps,
                              const NoiseConfig& noise);

// Distances sampled by error curves: every 1/curve_points of the longest
// length plus curve_extra, sorted and deduplicated.
std::vector<double> curve_distances(const ExperimentConfig& cfg);

// Cumulative-mean error curve for one scheme, averaged over cfg.seeds.
ErrorCurve error_vs_length(Scheme scheme, const ExperimentConfig& cfg, double linewidth_hz);

struct TfSignature {
    Spectrogram pol_x;
    Spectrogram pol_y;
    std::size_t bin_limit = 0;      // W for complex probes, W/2 + 1 for real ones
    double confidence_x = 0.0;
    double confidence_y = 0.0;
    double slope_bins_per_window = 0.0;  // unwrapped pol-x ridge
    double linearity_r2 = 0.0;
    double separation_bins = 0.0;        // mean ridge distance between polarizations
    double separation_hz = 0.0;
};

inline constexpr double kRidgeConfidenceThreshold = 0.5;

TfSignature tf_signature(const DualPolSequence& probe);

RunSummary run_aliasing_experiment(const ExperimentConfig& cfg);
RunSummary run_tf_signature(const ExperimentConfig& cfg);
RunSummary run_error_vs_length(const ExperimentConfig& cfg);

// Sequence CSV for inspection.
void generate_sequence(std::ostream& os, Scheme scheme, std::size_t size_param, double symbol_rate);

}  // namespace polprobe
