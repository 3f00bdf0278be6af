#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "mlvedit/engine.hpp"

namespace mlv {

// Everything a run needs, resolved from a flat key = value file. The
// manifest written next to the outputs is itself a file in this format, so
// a run can be repeated from its manifest alone.
struct RunConfig {
    EditConfig edit;
    EditMode mode = EditMode::Mlv;

    // model selection
    std::string model = "toy"; // toy | constant | prompt_edit | segment_bias
    std::size_t channels = 4;
    std::size_t prompt_dim = 8;
    std::size_t model_dim = 32;
    std::size_t layers = 2;
    std::uint64_t model_seed = 7;
    double jitter_magnitude = 0.0;
    std::uint64_t jitter_seed = 11;
    std::vector<double> base;      // scalar broadcasts; empty = model default
    std::vector<double> edit_gain; // scalar broadcasts; empty = model default
    double bias_magnitude = 1.0;
    std::uint64_t bias_seed = 99;

    // input
    std::string fixture = "random"; // random | ramp | constant
    std::size_t frames = 53;
    double fixture_value = 1.0;
    std::string input_path; // optional MLV1 file; overrides the fixture

    // prompts: zeros | ones | const:<v> | random:<index>
    std::string prompt_src = "zeros";
    std::string prompt_tar = "ones";

    // outputs
    std::vector<std::size_t> slice_channels = {0};

    void validate() const;
};

RunConfig parse_config(const std::filesystem::path& path);

// Applies one key = value pair; `context` prefixes error messages
// (typically "path:line").
void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value, const std::string& context);

// Canonical flat snapshot, parseable by parse_config.
std::string manifest_text(const RunConfig& config);

const char* mode_name(EditMode mode);
const char* sink_policy_name(SinkPolicy policy);
EditMode parse_mode(const std::string& name);

// 17 significant digits; enough to round-trip the exact double.
std::string format_double(double v);

PromptEmbedding make_prompt(const std::string& spec, std::size_t dim,
                            std::uint64_t root_seed);

LatentSequence make_fixture(const std::string& kind, std::size_t frames,
                            std::size_t channels, double value,
                            std::uint64_t root_seed);

std::unique_ptr<VelocityModel> build_model(const RunConfig& config);

} // namespace mlv
