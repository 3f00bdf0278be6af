#include "mlvedit/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "mlvedit/latent_io.hpp"
#include "mlvedit/toy_transformer.hpp"

namespace mlv {

namespace {

std::ofstream open_text(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc); // keep \n endings
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    return out;
}

void write_metrics_csv(const std::filesystem::path& path,
                       const BoundaryJumpReport& jumps,
                       const FrameSkipReport* skips) {
    std::ofstream out = open_text(path);
    out << "metric,index,value\n";
    for (std::size_t i = 0; i < jumps.per_boundary.size(); ++i) {
        out << "boundary_jump," << i << "," << format_double(jumps.per_boundary[i])
            << "\n";
    }
    out << "boundary_jump_mean,," << format_double(jumps.boundary_mean) << "\n";
    out << "interior_jump_mean,," << format_double(jumps.interior_mean) << "\n";
    if (skips != nullptr) {
        for (std::size_t i = 0; i < skips->per_pair.size(); ++i) {
            out << "frame_skip_pair," << i << "," << format_double(skips->per_pair[i])
                << "\n";
        }
        out << "frame_skip_mean,," << format_double(skips->mean) << "\n";
    }
    if (!out) {
        throw IoError("short write to " + path.string());
    }
}

void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<BoundaryTraceRow>& trace) {
    std::ofstream out = open_text(path);
    out << "step,time,boundary,pre_blend_jump,post_blend_jump,dv_norm_prev,"
           "dv_norm_curr\n";
    for (const BoundaryTraceRow& row : trace) {
        out << row.step << "," << format_double(row.time) << "," << row.boundary
            << "," << format_double(row.pre_blend_jump) << ","
            << format_double(row.post_blend_jump) << ","
            << format_double(row.dv_norm_prev) << ","
            << format_double(row.dv_norm_curr) << "\n";
    }
    if (!out) {
        throw IoError("short write to " + path.string());
    }
}

} // namespace

void write_pgm(const std::filesystem::path& path, const TemporalSlice& slice,
               std::size_t height) {
    if (slice.pixels.empty() || height == 0) {
        throw InvalidShapeError("refusing to write an empty slice image");
    }
    std::ofstream out = open_text(path);
    out << "P5\n" << slice.pixels.size() << " " << height << "\n255\n";
    for (std::size_t row = 0; row < height; ++row) {
        out.write(reinterpret_cast<const char*>(slice.pixels.data()),
                  static_cast<std::streamsize>(slice.pixels.size()));
    }
    if (!out) {
        throw IoError("short write to " + path.string());
    }
}

RunArtifacts run_experiment(const RunConfig& config,
                            const std::filesystem::path& out_dir, bool want_trace) {
    config.validate();
    std::filesystem::create_directories(out_dir);

    RunArtifacts artifacts;
    artifacts.manifest = out_dir / "manifest.txt";
    {
        std::ofstream out = open_text(artifacts.manifest);
        out << manifest_text(config);
        if (!out) {
            throw IoError("short write to " + artifacts.manifest.string());
        }
    }

    LatentSequence x_src =
        config.input_path.empty()
            ? make_fixture(config.fixture, config.frames, config.channels,
                           config.fixture_value, config.edit.root_seed)
            : read_latent(config.input_path);
    std::unique_ptr<VelocityModel> model = build_model(config);
    const PromptEmbedding p_src =
        make_prompt(config.prompt_src, config.prompt_dim, config.edit.root_seed);
    const PromptEmbedding p_tar =
        make_prompt(config.prompt_tar, config.prompt_dim, config.edit.root_seed);

    EditResult result =
        run_edit(x_src, p_src, p_tar, *model, config.edit, config.mode, want_trace);

    artifacts.edited = out_dir / "edited.mlv1";
    write_latent(artifacts.edited, result.latent);

    BoundaryJumpReport jumps = boundary_jump(result.latent, result.plan);
    FrameSkipReport skips;
    bool have_skips = false;
    if (config.model == "toy") {
        // Feature extraction uses a drift-free copy of the same backbone so
        // the metric never sees the perturbation being studied.
        const auto* toy = dynamic_cast<const ToyTransformer*>(model.get());
        ToyTransformer clean(toy->params());
        Matrix features =
            segment_features(clean, result.latent, result.plan, 0.0, p_tar);
        skips = frame_skip_similarity(features, result.plan);
        have_skips = true;
    }
    artifacts.metrics = out_dir / "metrics.csv";
    write_metrics_csv(artifacts.metrics, jumps, have_skips ? &skips : nullptr);

    if (want_trace) {
        artifacts.trace = out_dir / "trace.csv";
        write_trace_csv(artifacts.trace, result.trace);
    }

    for (std::size_t ch : config.slice_channels) {
        TemporalSlice slice = temporal_slice(result.latent, ch);
        std::filesystem::path p = out_dir / ("slice_ch" + std::to_string(ch) + ".pgm");
        write_pgm(p, slice);
        artifacts.slices.push_back(std::move(p));
    }
    return artifacts;
}

std::vector<std::pair<std::string, double>> read_metric_summaries(
    const std::filesystem::path& csv_path) {
    std::ifstream in(csv_path);
    if (!in) {
        throw IoError("cannot open " + csv_path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::pair<std::string, double>> summaries;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            if (line != "metric,index,value") {
                throw ParseError(csv_path.string() + ": unexpected header '" + line +
                                 "'");
            }
            continue;
        }
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? std::string::npos
                                                : line.find(',', c1 + 1);
        if (c2 == std::string::npos) {
            throw ParseError(csv_path.string() + ":" + std::to_string(line_no) +
                             ": expected three columns");
        }
        const std::string metric = line.substr(0, c1);
        const std::string index = line.substr(c1 + 1, c2 - c1 - 1);
        const std::string value = line.substr(c2 + 1);
        if (!index.empty()) continue; // per-item row, not a summary
        try {
            summaries.emplace_back(metric, std::stod(value));
        } catch (const std::exception&) {
            throw ParseError(csv_path.string() + ":" + std::to_string(line_no) +
                             ": bad value '" + value + "'");
        }
    }
    return summaries;
}

void compare_runs(const std::filesystem::path& dir_a,
                  const std::filesystem::path& dir_b, std::ostream& out) {
    const auto a = read_metric_summaries(dir_a / "metrics.csv");
    const auto b = read_metric_summaries(dir_b / "metrics.csv");
    out << std::left << std::setw(24) << "metric" << std::setw(26) << dir_a.string()
        << std::setw(26) << dir_b.string() << "delta (b-a)\n";
    for (const auto& [metric, value_a] : a) {
        const auto it = std::find_if(b.begin(), b.end(), [&](const auto& kv) {
            return kv.first == metric;
        });
        out << std::left << std::setw(24) << metric << std::setw(26)
            << format_double(value_a);
        if (it == b.end()) {
            out << std::setw(26) << "(missing)" << "-\n";
        } else {
            out << std::setw(26) << format_double(it->second)
                << format_double(it->second - value_a) << "\n";
        }
    }
    for (const auto& [metric, value_b] : b) {
        const bool in_a = std::any_of(a.begin(), a.end(), [&](const auto& kv) {
            return kv.first == metric;
        });
        if (!in_a) {
            out << std::left << std::setw(24) << metric << std::setw(26)
                << "(missing)" << std::setw(26) << format_double(value_b) << "-\n";
        }
    }
}

} // namespace mlv
