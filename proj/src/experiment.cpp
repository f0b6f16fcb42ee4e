// SPDX-License-Identifier: Apache-2.0

#include "polprobe/experiment.hpp"

#include "polprobe/csv_io.hpp"
#include "polprobe/receiver.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace polprobe {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value)
{
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

double parse_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': '" + v + "' is not a number");
    }
}

std::uint64_t parse_uint(const std::string& key, const std::string& v)
{
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw ConfigError("config key '" + key + "': '" + v + "' is not a non-negative integer");
    return out;
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string& key, const std::string& value, F&& conv)
{
    std::vector<T> out;
    for (const auto& item : split_list(value))
        out.push_back(conv(key, item));
    return out;
}

void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value)
{
    if (key == "schemes") {
        cfg.schemes.clear();
        for (const auto& s : split_list(value)) {
            try {
                cfg.schemes.push_back(parse_scheme(s));
            } catch (const ArgumentError& e) {
                throw ConfigError(e.what());
            }
        }
    } else if (key == "period") {
        cfg.period = parse_uint(key, value);
    } else if (key == "tf_period") {
        cfg.tf_period = parse_uint(key, value);
    } else if (key == "symbol_rate") {
        cfg.symbol_rate = parse_double(key, value);
    } else if (key == "fiber_speed") {
        cfg.fiber_speed = parse_double(key, value);
    } else if (key == "lengths") {
        cfg.lengths = parse_list<double>(key, value, parse_double);
    } else if (key == "alpha_db_km") {
        cfg.alpha_db_km = parse_double(key, value);
    } else if (key == "awgn_sigma") {
        cfg.awgn_sigma = parse_double(key, value);
    } else if (key == "linewidth_hz") {
        cfg.linewidth_hz = parse_double(key, value);
    } else if (key == "seeds") {
        cfg.seeds = parse_list<std::uint64_t>(key, value, parse_uint);
    } else if (key == "output_dir") {
        cfg.output_dir = value;
    } else if (key == "curve_points") {
        cfg.curve_points = parse_uint(key, value);
    } else if (key == "curve_extra") {
        cfg.curve_extra = parse_list<double>(key, value, parse_double);
    } else if (key == "workers") {
        cfg.workers = parse_uint(key, value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F&& fmt)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ',';
        out += fmt(v[i]);
    }
    return out;
}

std::ofstream open_output(const fs::path& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open '" + path.string() + "' for writing");
    return os;
}

void finish_output(std::ofstream& os, const fs::path& path)
{
    os.flush();
    if (!os)
        throw IoError("write to '" + path.string() + "' failed");
}

fs::path prepare_dir(const ExperimentConfig& cfg)
{
    const fs::path dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    return dir;
}

std::string result_text(const ExperimentConfig& cfg)
{
    ExperimentConfig c = cfg;
    c.workers = 0;
    std::string text = to_text(c);
    text.erase(text.rfind("workers = "));
    return text;
}

std::string header(const std::string& experiment, const ExperimentConfig& cfg)
{
    return "experiment=" + experiment + "\n" + result_text(cfg);
}

void write_manifest(const ExperimentConfig& cfg, const RunSummary& summary)
{
    nlohmann::ordered_json j;
    j["experiment"] = summary.experiment;
    nlohmann::ordered_json params;
    std::istringstream lines(result_text(cfg));
    std::string line;
    while (std::getline(lines, line)) {
        const auto eq = line.find('=');
        params[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    j["config"] = params;
    j["files"] = nlohmann::ordered_json::array();
    for (const auto& f : summary.files)
        j["files"].push_back(f.filename().string());

    const fs::path path = fs::path(cfg.output_dir) / ("manifest_" + summary.experiment + ".json");
    auto os = open_output(path);
    os << j.dump(2) << '\n';
    finish_output(os, path);
}

DualPolSequence probe_for(Scheme scheme, std::size_t period, double symbol_rate)
{
    return build_probe(scheme, size_param_for_period(scheme, period), symbol_rate);
}

std::size_t segments_in(double length, double segment_length)
{
    return static_cast<std::size_t>(std::floor(length / segment_length + 1e-9));
}

std::string length_tag(double length)
{
    std::ostringstream os;
    os << "L" << static_cast<long long>(std::llround(length)) << "m";
    return os.str();
}

// Least-squares slope and R^2 of y against its index.
std::pair<double, double> linear_fit(const std::vector<double>& y)
{
    const double n = static_cast<double>(y.size());
    if (y.size() < 2)
        return {0.0, 0.0};
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double x = static_cast<double>(i);
        sx += x;
        sy += y[i];
        sxx += x * x;
        sxy += x * y[i];
        syy += y[i] * y[i];
    }
    const double cov = sxy - sx * sy / n;
    const double var_x = sxx - sx * sx / n;
    const double var_y = syy - sy * sy / n;
    const double slope = cov / var_x;
    const double r2 = var_y > 0 ? cov * cov / (var_x * var_y) : 0.0;
    return {slope, r2};
}

}  // namespace

ExperimentConfig desk_preset()
{
    return ExperimentConfig{};
}

ExperimentConfig field_preset()
{
    ExperimentConfig cfg;
    cfg.period = 16384;
    cfg.tf_period = 65536;
    cfg.lengths = {8500.0, 20000.0};
    cfg.curve_extra = {8190.0, 8192.0, 8194.0, 8196.0, 8198.0, 16380.0, 16382.0, 16384.0, 16386.0, 16388.0};
    return cfg;
}

ExperimentConfig preset(const std::string& name)
{
    if (name == "desk")
        return desk_preset();
    if (name == "field")
        return field_preset();
    throw ConfigError("unknown preset '" + name + "' (expected desk or field)");
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base)
{
    std::istringstream is{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string t = trim(line);
        if (t.empty())
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        set_key(base, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return base;
}

ExperimentConfig load_config(const fs::path& path, ExperimentConfig base)
{
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot read config '" + path.string() + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    try {
        return parse_config(ss.str(), std::move(base));
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void apply_override(ExperimentConfig& cfg, std::string_view key_value)
{
    const auto eq = key_value.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError("override '" + std::string(key_value) + "' is not key=value");
    set_key(cfg, trim(key_value.substr(0, eq)), trim(key_value.substr(eq + 1)));
}

void validate(const ExperimentConfig& cfg)
{
    if (cfg.schemes.empty())
        throw ConfigError("at least one scheme is required");
    if (cfg.lengths.empty())
        throw ConfigError("at least one fiber length is required");
    if (cfg.seeds.empty())
        throw ConfigError("at least one seed is required");
    if (!(cfg.symbol_rate > 0.0) || !(cfg.fiber_speed > 0.0))
        throw ConfigError("symbol_rate and fiber_speed must be positive");
    for (double l : cfg.lengths)
        if (!(l > 0.0))
            throw ConfigError("fiber lengths must be positive");
    if (!(cfg.alpha_db_km >= 0.0) || !(cfg.awgn_sigma >= 0.0) || !(cfg.linewidth_hz >= 0.0))
        throw ConfigError("alpha_db_km, awgn_sigma and linewidth_hz must be non-negative");
    if (cfg.curve_points == 0)
        throw ConfigError("curve_points must be positive");
    if (cfg.output_dir.empty())
        throw ConfigError("output_dir must not be empty");
    for (Scheme s : cfg.schemes) {
        try {
            size_param_for_period(s, cfg.period);
            size_param_for_period(s, cfg.tf_period);
        } catch (const SizeError& e) {
            throw ConfigError(e.what());
        }
    }
    const double seg = spatial_resolution(cfg.symbol_rate, cfg.fiber_speed);
    for (double l : cfg.lengths)
        if (segments_in(l, seg) < 2)
            throw ConfigError("fiber length " + csv::format_double(l) + " m spans fewer than 2 segments");
}

std::string to_text(const ExperimentConfig& cfg)
{
    const auto num = [](double v) { return csv::format_double(v); };
    const auto uint = [](std::uint64_t v) { return std::to_string(v); };
    std::ostringstream os;
    os << "schemes = " << join(cfg.schemes, [](Scheme s) { return to_string(s); }) << '\n'
       << "period = " << cfg.period << '\n'
       << "tf_period = " << cfg.tf_period << '\n'
       << "symbol_rate = " << num(cfg.symbol_rate) << '\n'
       << "fiber_speed = " << num(cfg.fiber_speed) << '\n'
       << "lengths = " << join(cfg.lengths, num) << '\n'
       << "alpha_db_km = " << num(cfg.alpha_db_km) << '\n'
       << "awgn_sigma = " << num(cfg.awgn_sigma) << '\n'
       << "linewidth_hz = " << num(cfg.linewidth_hz) << '\n'
       << "seeds = " << join(cfg.seeds, uint) << '\n'
       << "output_dir = " << cfg.output_dir << '\n'
       << "curve_points = " << cfg.curve_points << '\n'
       << "curve_extra = " << join(cfg.curve_extra, num) << '\n'
       << "workers = " << cfg.workers << '\n';
    return os.str();
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn)
{
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = next++; i < count; i = next++)
                        fn(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                    next = count;
                }
            });
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

PortionError evaluate_portion(const DualPolSequence& probe, const ChannelRealization& ref, std::size_t taps,
                              const NoiseConfig& noise)
{
    if (taps == 0 || taps > ref.size())
        throw ArgumentError("evaluate_portion: portion of " + std::to_string(taps) + " segments outside the reference");
    const ChannelRealization portion = ref.truncated(taps);
    const EstimatedResponse est = estimate(simulate_rx(probe, portion, noise));
    const std::size_t compared = std::min(taps, est.window());
    const TapErrors err = tap_errors(est, portion.taps, compared - 1, SpanPolicy::FullWindow);

    PortionError out;
    out.taps = taps;
    out.compared = compared;
    if (err.det_rel.empty())
        throw UndefinedMetricError("evaluate_portion: every segment is singular");
    for (std::size_t i = 0; i < err.det_rel.size(); ++i) {
        out.det_rel_error += err.det_rel[i];
        out.phase_error += err.phase[i];
    }
    out.det_rel_error /= static_cast<double>(err.det_rel.size());
    out.phase_error /= static_cast<double>(err.phase.size());
    return out;
}

std::vector<double> curve_distances(const ExperimentConfig& cfg)
{
    const double longest = *std::max_element(cfg.lengths.begin(), cfg.lengths.end());
    std::vector<double> d;
    for (std::size_t i = 1; i <= cfg.curve_points; ++i)
        d.push_back(longest * static_cast<double>(i) / static_cast<double>(cfg.curve_points));
    for (double e : cfg.curve_extra)
        if (e > 0.0 && e <= longest)
            d.push_back(e);
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    return d;
}

ErrorCurve error_vs_length(Scheme scheme, const ExperimentConfig& cfg, double linewidth_hz)
{
    validate(cfg);
    const double longest = *std::max_element(cfg.lengths.begin(), cfg.lengths.end());
    const DualPolSequence probe = probe_for(scheme, cfg.period, cfg.symbol_rate);
    const double seg = spatial_resolution(cfg.symbol_rate, cfg.fiber_speed);

    std::vector<double> distances;
    for (double d : curve_distances(cfg))
        if (segments_in(d, seg) >= 1)
            distances.push_back(d);

    // One reference fiber per seed, probed over increasing portions.
    std::vector<ChannelRealization> refs(cfg.seeds.size());
    parallel_for(refs.size(), cfg.workers, [&](std::size_t s) {
        refs[s] = generate_channel({longest, cfg.symbol_rate, cfg.alpha_db_km, cfg.fiber_speed, cfg.seeds[s]});
    });

    const std::size_t n_seeds = cfg.seeds.size();
    std::vector<PortionError> results(distances.size() * n_seeds);
    parallel_for(results.size(), cfg.workers, [&](std::size_t task) {
        const std::size_t di = task / n_seeds;
        const std::size_t s = task % n_seeds;
        const std::size_t taps = std::min(segments_in(distances[di], seg), refs[s].size());
        results[task] = evaluate_portion(probe, refs[s], taps, {cfg.awgn_sigma, linewidth_hz, cfg.seeds[s]});
    });

    ErrorCurve curve;
    curve.scheme = to_string(scheme);
    curve.seed_count = n_seeds;
    for (std::size_t di = 0; di < distances.size(); ++di) {
        double det = 0.0, phase = 0.0;
        for (std::size_t s = 0; s < n_seeds; ++s) {
            det += results[di * n_seeds + s].det_rel_error;
            phase += results[di * n_seeds + s].phase_error;
        }
        curve.distances.push_back(distances[di]);
        curve.det_rel_error.push_back(det / static_cast<double>(n_seeds));
        curve.phase_error.push_back(phase / static_cast<double>(n_seeds));
    }
    return curve;
}

TfSignature tf_signature(const DualPolSequence& probe)
{
    const bool real_valued = probe.scheme != Scheme::Cazac;
    const std::size_t w = default_window_length(probe.size());

    TfSignature sig;
    sig.pol_x = spectrogram(probe.pol_x, w, w);
    sig.pol_y = spectrogram(probe.pol_y, w, w);
    sig.bin_limit = real_valued ? w / 2 + 1 : w;
    sig.confidence_x = ridge_confidence(sig.pol_x, sig.bin_limit);
    sig.confidence_y = ridge_confidence(sig.pol_y, sig.bin_limit);

    const auto rx = ridge(sig.pol_x, sig.bin_limit);
    const auto ry = ridge(sig.pol_y, sig.bin_limit);

    std::vector<double> unwrapped(rx.size());
    double offset = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        if (!real_valued && i > 0 && rx[i] + w / 2 < rx[i - 1])
            offset += static_cast<double>(w);
        unwrapped[i] = static_cast<double>(rx[i]) + offset;
    }
    std::tie(sig.slope_bins_per_window, sig.linearity_r2) = linear_fit(unwrapped);

    double sep = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const std::size_t d = rx[i] > ry[i] ? rx[i] - ry[i] : ry[i] - rx[i];
        sep += static_cast<double>(real_valued ? d : std::min(d, w - d));
    }
    sig.separation_bins = rx.empty() ? 0.0 : sep / static_cast<double>(rx.size());
    sig.separation_hz = sig.separation_bins * probe.symbol_rate / static_cast<double>(w);
    return sig;
}

RunSummary run_aliasing_experiment(const ExperimentConfig& cfg)
{
    validate(cfg);
    const fs::path dir = prepare_dir(cfg);
    const double seg = spatial_resolution(cfg.symbol_rate, cfg.fiber_speed);

    struct Task {
        Scheme scheme;
        double length;
    };
    std::vector<Task> tasks;
    for (Scheme s : cfg.schemes)
        for (double l : cfg.lengths)
            tasks.push_back({s, l});

    struct Result {
        EstimatedResponse est;
        std::vector<double> truth;
    };
    std::vector<Result> results(tasks.size());
    parallel_for(tasks.size(), cfg.workers, [&](std::size_t i) {
        const auto& t = tasks[i];
        const ChannelRealization ch =
            generate_channel({t.length, cfg.symbol_rate, cfg.alpha_db_km, cfg.fiber_speed, cfg.seeds.front()});
        const DualPolSequence probe = probe_for(t.scheme, cfg.period, cfg.symbol_rate);
        results[i].est = estimate(simulate_rx(probe, ch, {cfg.awgn_sigma, 0.0, cfg.seeds.front()}));
        results[i].truth = tap_intensity_profile(ch);
    });

    RunSummary summary{"aliasing", {}};
    const std::string head = header("aliasing", cfg);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const fs::path path = dir / ("aliasing_" + to_string(tasks[i].scheme) + "_" + length_tag(tasks[i].length) + ".csv");
        auto os = open_output(path);
        const auto& est = results[i].est;
        csv::write_comment(os, head);
        os << "# valid_span=" << est.valid_span.begin << ',' << est.valid_span.end << '\n';
        os << "lag,distance_m,estimated_intensity,true_intensity,in_valid_span\n";
        const auto profile = aliasing_profile(est);
        for (std::size_t k = 0; k < profile.size(); ++k) {
            const double truth = k < results[i].truth.size() ? results[i].truth[k] : 0.0;
            os << k << ',' << csv::format_double(static_cast<double>(k) * seg) << ',' << csv::format_double(profile[k])
               << ',' << csv::format_double(truth) << ',' << (est.valid_span.contains(k) ? 1 : 0) << '\n';
        }
        finish_output(os, path);
        summary.files.push_back(path);
    }
    write_manifest(cfg, summary);
    return summary;
}

RunSummary run_tf_signature(const ExperimentConfig& cfg)
{
    validate(cfg);
    const fs::path dir = prepare_dir(cfg);
    std::vector<TfSignature> sigs(cfg.schemes.size());
    parallel_for(sigs.size(), cfg.workers, [&](std::size_t i) {
        sigs[i] = tf_signature(probe_for(cfg.schemes[i], cfg.tf_period, cfg.symbol_rate));
    });

    RunSummary summary{"tf", {}};
    const std::string head = header("tf", cfg);
    for (std::size_t i = 0; i < sigs.size(); ++i) {
        for (const auto& [pol, sg] : {std::pair{"x", &sigs[i].pol_x}, std::pair{"y", &sigs[i].pol_y}}) {
            const fs::path path = dir / ("tf_" + to_string(cfg.schemes[i]) + "_" + pol + ".csv");
            auto os = open_output(path);
            csv::write_spectrogram(os, *sg, head);
            finish_output(os, path);
            summary.files.push_back(path);
        }
    }

    const fs::path path = dir / "tf_summary.csv";
    auto os = open_output(path);
    csv::write_comment(os, head);
    os << "scheme,window_len,confidence_x,confidence_y,ridge_detected,slope_bins_per_window,linearity_r2,"
          "separation_bins,separation_hz,separation_over_symbol_rate\n";
    for (std::size_t i = 0; i < sigs.size(); ++i) {
        const auto& s = sigs[i];
        const bool detected = std::min(s.confidence_x, s.confidence_y) >= kRidgeConfidenceThreshold;
        os << to_string(cfg.schemes[i]) << ',' << s.pol_x.window_len << ',' << csv::format_double(s.confidence_x) << ','
           << csv::format_double(s.confidence_y) << ',' << (detected ? 1 : 0) << ','
           << csv::format_double(s.slope_bins_per_window) << ',' << csv::format_double(s.linearity_r2) << ','
           << csv::format_double(s.separation_bins) << ',' << csv::format_double(s.separation_hz) << ','
           << csv::format_double(s.separation_hz / cfg.symbol_rate) << '\n';
    }
    finish_output(os, path);
    summary.files.push_back(path);
    write_manifest(cfg, summary);
    return summary;
}

RunSummary run_error_vs_length(const ExperimentConfig& cfg)
{
    validate(cfg);
    const fs::path dir = prepare_dir(cfg);
    RunSummary summary{"error-curve", {}};
    const std::string head = header("error-curve", cfg);

    std::vector<std::pair<std::string, double>> variants{{"noiseless", 0.0}};
    if (cfg.linewidth_hz > 0.0)
        variants.emplace_back("linewidth", cfg.linewidth_hz);

    for (Scheme s : cfg.schemes) {
        for (const auto& [tag, lw] : variants) {
            const ErrorCurve curve = error_vs_length(s, cfg, lw);
            const fs::path path = dir / ("error_" + to_string(s) + "_" + tag + ".csv");
            auto os = open_output(path);
            csv::write_error_curve(os, curve, head + "variant=" + tag + " linewidth_hz=" + csv::format_double(lw));
            finish_output(os, path);
            summary.files.push_back(path);
        }
    }
    write_manifest(cfg, summary);
    return summary;
}

void generate_sequence(std::ostream& os, Scheme scheme, std::size_t size_param, double symbol_rate)
{
    const DualPolSequence seq = build_probe(scheme, size_param, symbol_rate);
    std::ostringstream comment;
    comment << "scheme=" << to_string(scheme) << " size_param=" << size_param << " period=" << seq.size()
            << " symbol_rate=" << csv::format_double(symbol_rate);
    csv::write_sequence(os, seq, comment.str());
}

}  // namespace polprobe
