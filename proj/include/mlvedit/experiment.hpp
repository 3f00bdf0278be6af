#pragma once

#include <filesystem>
#include <iosfwd>

#include "mlvedit/metrics.hpp"
#include "mlvedit/run_config.hpp"

namespace mlv {

// Output bundle of one run, rooted at an output directory:
//   manifest.txt   config snapshot, written before any computation
//   edited.mlv1    final latent
//   metrics.csv    boundary/interior jumps, feature similarities (toy model)
//   trace.csv      per-step per-boundary seam numbers (when tracing)
//   slice_ch<c>.pgm temporal slices of the requested channels
struct RunArtifacts {
    std::filesystem::path manifest;
    std::filesystem::path edited;
    std::filesystem::path metrics;
    std::filesystem::path trace; // empty when tracing was off
    std::vector<std::filesystem::path> slices;
};

RunArtifacts run_experiment(const RunConfig& config,
                            const std::filesystem::path& out_dir, bool want_trace);

// Side-by-side metric summaries of two run directories with deltas (b - a).
void compare_runs(const std::filesystem::path& dir_a,
                  const std::filesystem::path& dir_b, std::ostream& out);

void write_pgm(const std::filesystem::path& path, const TemporalSlice& slice,
               std::size_t height = 16);

// Summary rows (metric name -> value) of a metrics.csv file.
std::vector<std::pair<std::string, double>> read_metric_summaries(
    const std::filesystem::path& csv_path);

} // namespace mlv
