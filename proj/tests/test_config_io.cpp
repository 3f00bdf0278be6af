#include "doctest.h"

#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mlvedit/experiment.hpp"
#include "mlvedit/latent_io.hpp"

using namespace mlv;

namespace {

namespace fs = std::filesystem;

fs::path temp_file(const char* name) {
    return fs::temp_directory_path() / name;
}

fs::path write_text(const char* name, const std::string& text) {
    const fs::path path = temp_file(name);
    std::ofstream out(path);
    out << text;
    return path;
}

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("latent files round-trip bit for bit") {
    const fs::path path = temp_file("latent_roundtrip.mlv1");
    auto z = sample_noise(SeedSpec{81, "fixture", 0}, 53, 4);
    z.at(0, 0) = 0.1 + 0.2; // a value with no short decimal form
    write_latent(path, z);
    auto back = read_latent(path);
    REQUIRE(back.same_shape(z));
    auto a = z.flat();
    auto b = back.flat();
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
    fs::remove(path);
}

TEST_CASE("latent reader rejects malformed files") {
    const fs::path missing = temp_file("no_such_file.mlv1");
    fs::remove(missing);
    CHECK_THROWS_AS(read_latent(missing), IoError);

    const fs::path bad_magic = write_text("bad_magic.mlv1", "WRONGMAG\x01\x00\x00\x00");
    CHECK_THROWS_AS(read_latent(bad_magic), ParseError);
    fs::remove(bad_magic);

    // valid header promising more payload than the file holds
    const fs::path truncated = temp_file("truncated.mlv1");
    {
        LatentSequence z(4, 2, 1.5);
        write_latent(truncated, z);
        fs::resize_file(truncated, fs::file_size(truncated) - 8);
    }
    CHECK_THROWS_AS(read_latent(truncated), ParseError);
    fs::remove(truncated);
}

TEST_CASE("an empty config file yields the documented defaults") {
    const fs::path path = write_text("empty.cfg", "# nothing but a comment\n\n");
    RunConfig config = parse_config(path);
    CHECK(config.edit.T == 25);
    CHECK(config.edit.cfg_scale == 7.5);
    CHECK(config.edit.n == 21);
    CHECK(config.edit.k == 5);
    CHECK(config.edit.sink_policy == SinkPolicy::FirstOfInitial);
    CHECK(config.edit.blend_enabled);
    CHECK(config.mode == EditMode::Mlv);
    CHECK(config.model == "toy");
    CHECK(config.frames == 53);
    fs::remove(path);
}

TEST_CASE("config errors carry the file position") {
    const fs::path unknown = write_text("unknown.cfg", "T = 5\nbogus_key = 1\n");
    CHECK_THROWS_WITH_AS(parse_config(unknown),
                         doctest::Contains((unknown.string() + ":2").c_str()),
                         InvalidConfigError);
    fs::remove(unknown);

    const fs::path noeq = write_text("noeq.cfg", "just words\n");
    CHECK_THROWS_AS(parse_config(noeq), ParseError);
    fs::remove(noeq);

    const fs::path badnum = write_text("badnum.cfg", "T = soon\n");
    CHECK_THROWS_WITH_AS(parse_config(badnum), doctest::Contains(":1"), ParseError);
    fs::remove(badnum);

    const fs::path badk = write_text("badk.cfg", "n = 8\nk = 8\n");
    CHECK_THROWS_AS(parse_config(badk), InvalidConfigError);
    fs::remove(badk);
}

TEST_CASE("long and short key names are interchangeable") {
    const fs::path a = write_text("short.cfg", "T=7\nw=2.5\nn=9\nk=3\nF=30\n");
    const fs::path b = write_text("long.cfg",
                                  "timesteps = 7\ncfg_scale = 2.5\n"
                                  "segment_length = 9\noverlap = 3\nframes = 30\n");
    RunConfig ca = parse_config(a);
    RunConfig cb = parse_config(b);
    CHECK(ca.edit.T == cb.edit.T);
    CHECK(ca.edit.cfg_scale == cb.edit.cfg_scale);
    CHECK(ca.edit.n == cb.edit.n);
    CHECK(ca.edit.k == cb.edit.k);
    CHECK(ca.frames == cb.frames);
    fs::remove(a);
    fs::remove(b);
}

TEST_CASE("booleans accept the usual spellings") {
    RunConfig config;
    apply_config_entry(config, "blend", "off", "test");
    CHECK_FALSE(config.edit.blend_enabled);
    apply_config_entry(config, "blend", "true", "test");
    CHECK(config.edit.blend_enabled);
    apply_config_entry(config, "blend", "0", "test");
    CHECK_FALSE(config.edit.blend_enabled);
    CHECK_THROWS_AS(apply_config_entry(config, "blend", "maybe", "test"),
                    ParseError);
}

TEST_CASE("manifests parse back to the config that wrote them") {
    RunConfig config;
    config.edit.T = 13;
    config.edit.cfg_scale = 3.25;
    config.edit.n = 11;
    config.edit.k = 4;
    config.edit.root_seed = 1234567890123456789ull;
    config.edit.sink_policy = SinkPolicy::FirstOfPrevious;
    config.edit.blend_enabled = false;
    config.mode = EditMode::Naive;
    config.model = "segment_bias";
    config.edit_gain = {0.5, -1.5, 2.0, 0.0};
    config.bias_magnitude = 0.75;
    config.fixture = "ramp";
    config.frames = 37;
    config.prompt_tar = "const:0.125";
    config.slice_channels = {0, 2};

    const std::string text = manifest_text(config);
    CHECK(text == manifest_text(config)); // deterministic snapshot

    const fs::path path = write_text("manifest_roundtrip.cfg", text);
    RunConfig back = parse_config(path);
    CHECK(back.edit.T == config.edit.T);
    CHECK(back.edit.cfg_scale == config.edit.cfg_scale);
    CHECK(back.edit.n == config.edit.n);
    CHECK(back.edit.k == config.edit.k);
    CHECK(back.edit.root_seed == config.edit.root_seed);
    CHECK(back.edit.sink_policy == config.edit.sink_policy);
    CHECK(back.edit.blend_enabled == config.edit.blend_enabled);
    CHECK(back.mode == config.mode);
    CHECK(back.model == config.model);
    CHECK(back.edit_gain == config.edit_gain);
    CHECK(back.bias_magnitude == config.bias_magnitude);
    CHECK(back.fixture == config.fixture);
    CHECK(back.frames == config.frames);
    CHECK(back.prompt_tar == config.prompt_tar);
    CHECK(back.slice_channels == config.slice_channels);
    fs::remove(path);
}

TEST_CASE("doubles print with full precision") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-2.0) == "-2");
    const double v = 1.0 / 3.0;
    double back = 0.0;
    const std::string s = format_double(v);
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
}

TEST_CASE("prompt specs cover the documented forms") {
    auto zeros = make_prompt("zeros", 4, 0);
    for (double v : zeros.values) CHECK(v == 0.0);
    auto ones = make_prompt("ones", 4, 0);
    for (double v : ones.values) CHECK(v == 1.0);
    auto constant = make_prompt("const:2.5", 4, 0);
    for (double v : constant.values) CHECK(v == 2.5);
    auto r0 = make_prompt("random:3", 4, 9);
    auto r1 = make_prompt("random:3", 4, 9);
    CHECK(r0.values == r1.values);
    auto r2 = make_prompt("random:4", 4, 9);
    CHECK_FALSE(r0.values == r2.values);
    CHECK_THROWS_AS(make_prompt("sevens", 4, 0), InvalidConfigError);
    CHECK_THROWS_AS(make_prompt("const:many", 4, 0), ParseError);
}

TEST_CASE("fixtures have their stated structure") {
    auto constant = make_fixture("constant", 5, 3, 2.0, 0);
    for (double v : constant.flat()) CHECK(v == 2.0);

    auto ramp = make_fixture("ramp", 10, 2, 0.0, 0);
    CHECK(ramp.at(0, 0) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(ramp.at(9, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ramp.at(0, 1) == doctest::Approx(0.6).epsilon(1e-12));

    auto r0 = make_fixture("random", 6, 2, 0.0, 5);
    auto r1 = make_fixture("random", 6, 2, 0.0, 5);
    CHECK(r0 == r1);
    auto r2 = make_fixture("random", 6, 2, 0.0, 6);
    CHECK_FALSE(r0 == r2);

    CHECK_THROWS_AS(make_fixture("plaid", 5, 3, 0.0, 0), InvalidConfigError);
}

TEST_CASE("model factory resolves channel lists") {
    RunConfig config;
    config.model = "constant";
    config.base = {0.25};
    auto model = build_model(config);
    CHECK(model->channels() == 4);
    LatentSequence z(3, 4, 0.0);
    auto v = eval_velocity(*model, z, 0.5, PromptEmbedding::zeros(8),
                           SinkContext::off(), 0);
    for (double x : v.flat()) CHECK(x == 0.25);

    config.base = {1.0, 2.0, 3.0}; // neither 1 nor channels entries
    CHECK_THROWS_AS(build_model(config), InvalidConfigError);

    config.model = "toy";
    config.base.clear();
    auto toy = build_model(config);
    CHECK(toy->prompt_dim() == 8);
}

TEST_CASE("an experiment writes its full artifact set") {
    const fs::path dir = fs::temp_directory_path() / "mlv_exp_smoke";
    fs::remove_all(dir);

    RunConfig config;
    config.model = "segment_bias";
    config.fixture = "ramp";
    config.frames = 53;
    config.edit.T = 4;
    config.edit.cfg_scale = 1.0;
    config.slice_channels = {0, 1};

    auto artifacts = run_experiment(config, dir, /*want_trace=*/true);
    CHECK(fs::exists(artifacts.manifest));
    CHECK(fs::exists(artifacts.edited));
    CHECK(fs::exists(artifacts.metrics));
    CHECK(fs::exists(artifacts.trace));
    REQUIRE(artifacts.slices.size() == 2);
    CHECK(fs::exists(artifacts.slices[0]));
    CHECK(fs::exists(artifacts.slices[1]));

    // the manifest is a loadable config equal to what ran
    RunConfig back = parse_config(artifacts.manifest);
    CHECK(back.edit.T == 4);
    CHECK(back.model == "segment_bias");

    // the edited latent parses and has the right shape
    auto edited = read_latent(artifacts.edited);
    CHECK(edited.frames() == 53);
    CHECK(edited.channels() == 4);

    // summaries parse and include the headline numbers
    auto summaries = read_metric_summaries(artifacts.metrics);
    bool has_boundary = false;
    bool has_interior = false;
    for (const auto& [name, value] : summaries) {
        if (name == "boundary_jump_mean") has_boundary = true;
        if (name == "interior_jump_mean") has_interior = true;
        CHECK(std::isfinite(value));
    }
    CHECK(has_boundary);
    CHECK(has_interior);

    // the slice file is a binary PGM with the frame count as width
    const std::string pgm = read_bytes(artifacts.slices[0]);
    CHECK(pgm.rfind("P5\n53 16\n255\n", 0) == 0);
    CHECK(pgm.size() == std::string("P5\n53 16\n255\n").size() + 53 * 16);

    // rerunning the same config reproduces the latent byte for byte
    const fs::path dir2 = fs::temp_directory_path() / "mlv_exp_smoke2";
    fs::remove_all(dir2);
    auto artifacts2 = run_experiment(config, dir2, /*want_trace=*/true);
    CHECK(read_bytes(artifacts.edited) == read_bytes(artifacts2.edited));
    CHECK(read_bytes(artifacts.metrics) == read_bytes(artifacts2.metrics));
    CHECK(read_bytes(artifacts.trace) == read_bytes(artifacts2.trace));

    std::ostringstream cmp;
    compare_runs(dir, dir2, cmp);
    CHECK(cmp.str().find("boundary_jump_mean") != std::string::npos);

    fs::remove_all(dir);
    fs::remove_all(dir2);
}

TEST_CASE("trace files carry the per-step seam numbers") {
    const fs::path dir = fs::temp_directory_path() / "mlv_trace_smoke";
    fs::remove_all(dir);

    RunConfig config;
    config.model = "prompt_edit";
    config.fixture = "constant";
    config.frames = 50;
    config.edit.T = 3;

    auto artifacts = run_experiment(config, dir, /*want_trace=*/true);
    std::ifstream in(artifacts.trace);
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "step,time,boundary,pre_blend_jump,post_blend_jump,dv_norm_prev,dv_norm_curr");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 3 * 2); // T steps, two interior boundaries for F = 50

    fs::remove_all(dir);
}

TEST_CASE("metric summary reader rejects foreign files") {
    const fs::path bogus = write_text("bogus_metrics.csv", "a,b\n1,2\n");
    CHECK_THROWS_AS(read_metric_summaries(bogus), ParseError);
    fs::remove(bogus);
    const fs::path missing = temp_file("missing_metrics.csv");
    fs::remove(missing);
    CHECK_THROWS_AS(read_metric_summaries(missing), IoError);
}
