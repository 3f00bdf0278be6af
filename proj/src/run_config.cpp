#include "mlvedit/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mlvedit/analytic_model.hpp"
#include "mlvedit/toy_transformer.hpp"
#include "mlvedit/version.hpp"

namespace mlv {

namespace {

std::string trim(const std::string& s) {
    const auto start = s.find_first_not_of(" \t\r");
    if (start == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(start, end - start + 1);
}

double parse_double_value(const std::string& value, const std::string& context) {
    double out = 0.0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError(context + ": '" + value + "' is not a number");
    }
    if (!std::isfinite(out)) {
        throw ParseError(context + ": '" + value + "' is not finite");
    }
    return out;
}

std::uint64_t parse_u64_value(const std::string& value, const std::string& context) {
    std::uint64_t out = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError(context + ": '" + value + "' is not an unsigned integer");
    }
    return out;
}

std::size_t parse_size_value(const std::string& value, const std::string& context) {
    return static_cast<std::size_t>(parse_u64_value(value, context));
}

bool parse_bool_value(const std::string& value, const std::string& context) {
    if (value == "true" || value == "on" || value == "1") return true;
    if (value == "false" || value == "off" || value == "0") return false;
    throw ParseError(context + ": '" + value + "' is not a boolean (use on/off)");
}

std::vector<double> parse_double_list(const std::string& value,
                                      const std::string& context) {
    std::vector<double> out;
    if (trim(value).empty()) return out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double_value(trim(item), context));
    }
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& value,
                                         const std::string& context) {
    std::vector<std::size_t> out;
    if (trim(value).empty()) return out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_size_value(trim(item), context));
    }
    return out;
}

SinkPolicy parse_sink_policy(const std::string& value, const std::string& context) {
    if (value == "none") return SinkPolicy::None;
    if (value == "first_of_initial") return SinkPolicy::FirstOfInitial;
    if (value == "first_of_previous") return SinkPolicy::FirstOfPrevious;
    throw ParseError(context + ": unknown sink policy '" + value + "'");
}

std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ",";
        out += format_double(values[i]);
    }
    return out;
}

std::string join_sizes(const std::vector<std::size_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ",";
        out += std::to_string(values[i]);
    }
    return out;
}

// Per-channel vector from an empty (use fallback), single (broadcast) or
// exact-length list.
std::vector<double> resolve_channel_list(const std::vector<double>& raw,
                                         std::size_t channels, double fallback,
                                         const char* name) {
    if (raw.empty()) return std::vector<double>(channels, fallback);
    if (raw.size() == 1) return std::vector<double>(channels, raw[0]);
    if (raw.size() == channels) return raw;
    throw InvalidConfigError(std::string(name) + " needs 1 or " +
                             std::to_string(channels) + " values, got " +
                             std::to_string(raw.size()));
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

const char* mode_name(EditMode mode) {
    switch (mode) {
    case EditMode::Mlv: return "mlv";
    case EditMode::Naive: return "naive";
    case EditMode::Wan: return "wan";
    }
    return "mlv";
}

const char* sink_policy_name(SinkPolicy policy) {
    switch (policy) {
    case SinkPolicy::None: return "none";
    case SinkPolicy::FirstOfInitial: return "first_of_initial";
    case SinkPolicy::FirstOfPrevious: return "first_of_previous";
    }
    return "none";
}

EditMode parse_mode(const std::string& name) {
    if (name == "mlv") return EditMode::Mlv;
    if (name == "naive") return EditMode::Naive;
    if (name == "wan") return EditMode::Wan;
    throw InvalidConfigError("unknown mode '" + name + "' (use mlv, naive or wan)");
}

void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value, const std::string& context) {
    if (key == "T" || key == "timesteps") {
        config.edit.T = parse_size_value(value, context);
    } else if (key == "w" || key == "cfg_scale") {
        config.edit.cfg_scale = parse_double_value(value, context);
    } else if (key == "n" || key == "segment_length") {
        config.edit.n = parse_size_value(value, context);
    } else if (key == "k" || key == "overlap") {
        config.edit.k = parse_size_value(value, context);
    } else if (key == "seed") {
        config.edit.root_seed = parse_u64_value(value, context);
    } else if (key == "sink_policy") {
        config.edit.sink_policy = parse_sink_policy(value, context);
    } else if (key == "anchor_frames") {
        config.edit.anchor_frames = parse_size_value(value, context);
    } else if (key == "blend") {
        config.edit.blend_enabled = parse_bool_value(value, context);
    } else if (key == "sink_on_source") {
        config.edit.sink_on_source = parse_bool_value(value, context);
    } else if (key == "mode") {
        config.mode = parse_mode(value);
    } else if (key == "model") {
        config.model = value;
    } else if (key == "channels") {
        config.channels = parse_size_value(value, context);
    } else if (key == "prompt_dim") {
        config.prompt_dim = parse_size_value(value, context);
    } else if (key == "model_dim") {
        config.model_dim = parse_size_value(value, context);
    } else if (key == "layers") {
        config.layers = parse_size_value(value, context);
    } else if (key == "model_seed") {
        config.model_seed = parse_u64_value(value, context);
    } else if (key == "jitter_magnitude") {
        config.jitter_magnitude = parse_double_value(value, context);
    } else if (key == "jitter_seed") {
        config.jitter_seed = parse_u64_value(value, context);
    } else if (key == "base") {
        config.base = parse_double_list(value, context);
    } else if (key == "edit_gain") {
        config.edit_gain = parse_double_list(value, context);
    } else if (key == "bias_magnitude") {
        config.bias_magnitude = parse_double_value(value, context);
    } else if (key == "bias_seed") {
        config.bias_seed = parse_u64_value(value, context);
    } else if (key == "fixture") {
        config.fixture = value;
    } else if (key == "frames" || key == "F") {
        config.frames = parse_size_value(value, context);
    } else if (key == "fixture_value") {
        config.fixture_value = parse_double_value(value, context);
    } else if (key == "input") {
        config.input_path = value;
    } else if (key == "prompt_src") {
        config.prompt_src = value;
    } else if (key == "prompt_tar") {
        config.prompt_tar = value;
    } else if (key == "slice_channels") {
        config.slice_channels = parse_size_list(value, context);
    } else if (key == "tool_version") {
        // informational; manifests carry it so they stay parseable
    } else {
        throw InvalidConfigError(context + ": unknown key '" + key + "'");
    }
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config " + path.string());
    }
    RunConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": empty key");
        }
        apply_config_entry(config, key, value,
                           path.string() + ":" + std::to_string(line_no));
    }
    config.validate();
    return config;
}

void RunConfig::validate() const {
    edit.validate();
    if (model != "toy" && model != "constant" && model != "prompt_edit" &&
        model != "segment_bias") {
        throw InvalidConfigError("unknown model '" + model + "'");
    }
    if (fixture != "random" && fixture != "ramp" && fixture != "constant") {
        throw InvalidConfigError("unknown fixture '" + fixture + "'");
    }
    if (channels == 0 || prompt_dim == 0) {
        throw InvalidConfigError("channels and prompt_dim must be positive");
    }
    if (model == "toy" && (model_dim == 0 || layers == 0)) {
        throw InvalidConfigError("toy model needs positive model_dim and layers");
    }
    if (frames == 0 && input_path.empty()) {
        throw InvalidConfigError("fixture needs at least one frame");
    }
    if (!std::isfinite(jitter_magnitude) || !std::isfinite(bias_magnitude) ||
        !std::isfinite(fixture_value)) {
        throw InvalidConfigError("magnitudes must be finite");
    }
    for (std::size_t ch : slice_channels) {
        if (ch >= channels) {
            throw InvalidConfigError("slice channel " + std::to_string(ch) +
                                     " outside " + std::to_string(channels) +
                                     " channels");
        }
    }
}

std::string manifest_text(const RunConfig& config) {
    std::ostringstream out;
    out << "# " << kToolName << " run manifest; a valid config file\n";
    out << "tool_version = " << kToolVersion << "\n";
    out << "mode = " << mode_name(config.mode) << "\n";
    out << "T = " << config.edit.T << "\n";
    out << "cfg_scale = " << format_double(config.edit.cfg_scale) << "\n";
    out << "n = " << config.edit.n << "\n";
    out << "k = " << config.edit.k << "\n";
    out << "seed = " << config.edit.root_seed << "\n";
    out << "sink_policy = " << sink_policy_name(config.edit.sink_policy) << "\n";
    out << "anchor_frames = " << config.edit.anchor_frames << "\n";
    out << "blend = " << (config.edit.blend_enabled ? "on" : "off") << "\n";
    out << "sink_on_source = " << (config.edit.sink_on_source ? "on" : "off") << "\n";
    out << "model = " << config.model << "\n";
    out << "channels = " << config.channels << "\n";
    out << "prompt_dim = " << config.prompt_dim << "\n";
    out << "model_dim = " << config.model_dim << "\n";
    out << "layers = " << config.layers << "\n";
    out << "model_seed = " << config.model_seed << "\n";
    out << "jitter_magnitude = " << format_double(config.jitter_magnitude) << "\n";
    out << "jitter_seed = " << config.jitter_seed << "\n";
    out << "base = " << join_doubles(config.base) << "\n";
    out << "edit_gain = " << join_doubles(config.edit_gain) << "\n";
    out << "bias_magnitude = " << format_double(config.bias_magnitude) << "\n";
    out << "bias_seed = " << config.bias_seed << "\n";
    out << "fixture = " << config.fixture << "\n";
    out << "frames = " << config.frames << "\n";
    out << "fixture_value = " << format_double(config.fixture_value) << "\n";
    out << "input = " << config.input_path << "\n";
    out << "prompt_src = " << config.prompt_src << "\n";
    out << "prompt_tar = " << config.prompt_tar << "\n";
    out << "slice_channels = " << join_sizes(config.slice_channels) << "\n";
    return out.str();
}

PromptEmbedding make_prompt(const std::string& spec, std::size_t dim,
                            std::uint64_t root_seed) {
    if (spec == "zeros") return PromptEmbedding::zeros(dim);
    if (spec == "ones") return PromptEmbedding::ones(dim);
    if (spec.rfind("const:", 0) == 0) {
        const double v = parse_double_value(spec.substr(6), "prompt '" + spec + "'");
        return PromptEmbedding::constant(dim, v, spec);
    }
    if (spec.rfind("random:", 0) == 0) {
        const std::uint64_t idx =
            parse_u64_value(spec.substr(7), "prompt '" + spec + "'");
        return PromptEmbedding::random(dim, root_seed, idx, spec);
    }
    throw InvalidConfigError("unknown prompt spec '" + spec +
                             "' (use zeros, ones, const:<v> or random:<i>)");
}

LatentSequence make_fixture(const std::string& kind, std::size_t frames,
                            std::size_t channels, double value,
                            std::uint64_t root_seed) {
    if (kind == "constant") {
        return LatentSequence(frames, channels, value);
    }
    if (kind == "ramp") {
        // Smooth in time, offset per channel; adjacent-frame differences are
        // uniformly 1/frames.
        LatentSequence out(frames, channels);
        for (std::size_t f = 0; f < frames; ++f) {
            auto row = out.frame(f);
            for (std::size_t c = 0; c < channels; ++c) {
                row[c] = static_cast<double>(f + 1) / static_cast<double>(frames) +
                         0.5 * static_cast<double>(c);
            }
        }
        return out;
    }
    if (kind == "random") {
        return sample_noise(SeedSpec{root_seed, "fixture", 0}, frames, channels);
    }
    throw InvalidConfigError("unknown fixture '" + kind + "'");
}

std::unique_ptr<VelocityModel> build_model(const RunConfig& config) {
    if (config.model == "toy") {
        ToyTransformerParams params =
            init_toy_params(config.channels, config.prompt_dim, config.model_dim,
                            config.layers, config.model_seed);
        return std::make_unique<ToyTransformer>(std::move(params),
                                                config.jitter_magnitude,
                                                config.jitter_seed);
    }
    if (config.model == "constant") {
        return std::make_unique<AnalyticVelocityModel>(make_constant_oracle(
            config.channels, config.prompt_dim,
            resolve_channel_list(config.base, config.channels, 1.0, "base")));
    }
    if (config.model == "prompt_edit") {
        return std::make_unique<AnalyticVelocityModel>(make_prompt_edit_oracle(
            config.channels, config.prompt_dim,
            resolve_channel_list(config.edit_gain, config.channels, 1.0,
                                 "edit_gain")));
    }
    if (config.model == "segment_bias") {
        return std::make_unique<AnalyticVelocityModel>(make_segment_bias_oracle(
            config.channels, config.prompt_dim,
            resolve_channel_list(config.edit_gain, config.channels, 1.0,
                                 "edit_gain"),
            config.bias_magnitude, config.bias_seed));
    }
    throw InvalidConfigError("unknown model '" + config.model + "'");
}

} // namespace mlv
