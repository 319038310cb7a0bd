#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "splatdyn/driver.hpp"
#include "splatdyn/error.hpp"
#include "splatdyn/image_io.hpp"
#include "splatdyn/parallel.hpp"
#include "splatdyn/ply.hpp"
#include "splatdyn/presets.hpp"
#include "splatdyn/refiner.hpp"
#include "splatdyn/scene.hpp"

namespace splatdyn {
namespace {

namespace fs = std::filesystem;

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt_vec(const Vec3& v) {
  std::ostringstream s;
  s << "(" << v.x() << ", " << v.y() << ", " << v.z() << ")";
  return s.str();
}

struct Globals {
  int threads = hardware_threads();
  bool deterministic = true;
  std::string output_dir;
  bool quiet = false;
};

int cmd_simulate(const Globals& g, const std::string& config_path, std::ostream& out, std::ostream& err) {
  const auto config = load_config_file(config_path);
  RunOptions opt;
  opt.base_dir = fs::path(config_path).parent_path();
  if (opt.base_dir.empty()) opt.base_dir = ".";
  opt.threads = g.threads;
  opt.deterministic = g.deterministic;
  if (!g.output_dir.empty()) opt.output_dir = fs::path(g.output_dir);
  opt.log = g.quiet ? nullptr : &err;
  const auto report = run_simulation(config, opt);
  out << "frames: " << report.frames.size() << "\n"
      << "output: " << report.output_dir.string() << "\n"
      << "substeps: " << report.substeps << "\n"
      << "nan_free: " << (report.nan_free() ? "true" : "false") << "\n"
      << "wall_seconds: " << report.total_wall_seconds << "\n";
  return report.nan_free() ? kExitOk : kExitFault;
}

int cmd_render(const Globals& g, const std::string& ply, const std::string& camera_path, std::string output,
               std::ostream& out) {
  const auto cloud = load_ply_file(ply);
  const auto settings = parse_render_settings(read_text(camera_path));
  const auto [lo, hi] = cloud.bounds();
  const auto camera = resolve_camera(settings.camera, lo, hi);
  if (output.empty()) output = "render.png";
  fs::path path(output);
  if (!g.output_dir.empty() && path.is_relative()) {
    fs::create_directories(g.output_dir);
    path = fs::path(g.output_dir) / path;
  }
  write_image(render_static(cloud, camera, settings.background, g.threads), path);
  out << "wrote " << path.string() << " (" << camera.width << "x" << camera.height << ", " << cloud.count()
      << " splats)\n";
  return kExitOk;
}

int cmd_validate(const std::string& config_path, std::ostream& out) {
  const auto c = load_config_file(config_path);
  const auto& m = c.material.params;
  out << "config: ok\n"
      << "input_ply: " << c.input_ply << "\n"
      << "material: " << (c.material.preset.empty() ? "inline" : c.material.preset) << " (E=" << m.youngs_modulus
      << ", nu=" << m.poisson_ratio << ", rho=" << m.density << ", " << to_string(m.elasticity) << ", "
      << to_string(m.plasticity) << ")\n"
      << "grid: " << c.grid.resolution << " cells, margin " << c.grid.margin
      << (c.grid.bounds ? ", explicit bounds" : ", fitted to cloud") << "\n"
      << "sim: dt=" << c.sim.dt << ", substeps_per_frame=" << c.sim.substeps_per_frame
      << ", frame_count=" << c.sim.frame_count << ", gravity=" << fmt_vec(c.sim.gravity) << "\n"
      << "boundary: " << c.boundary.size() << " condition(s)\n"
      << "camera: " << c.camera.width << "x" << c.camera.height << ", fov_y=" << c.camera.fov_y_deg << "\n"
      << "output: " << c.output.directory << " (" << (c.output.format == ImageFormat::Png ? "png" : "ppm") << ")\n";
  return kExitOk;
}

int cmd_info(const std::string& ply, std::ostream& out) {
  const auto cloud = load_ply_file(ply);
  const auto [lo, hi] = cloud.bounds();
  out << "count: " << cloud.count() << "\n"
      << "sh_degree: " << cloud.sh_degree << "\n"
      << "bounds_min: " << fmt_vec(lo) << "\n"
      << "bounds_max: " << fmt_vec(hi) << "\n";
  return kExitOk;
}

struct RefineArgs {
  std::string prompt;
  bool offline = false;
  std::string endpoint;
  std::string model;
  std::string token_env = "SPLATDYN_REFINER_TOKEN";
  double timeout = 30.0;
  bool no_fallback = false;
};

int cmd_refine(const Globals& g, const RefineArgs& a, std::ostream& out, std::ostream& err) {
  RefinerConfig cfg;
  cfg.mode = a.offline || a.endpoint.empty() ? RefinerMode::Offline : RefinerMode::Online;
  cfg.endpoint = a.endpoint;
  cfg.model = a.model;
  cfg.token_env = a.token_env;
  cfg.timeout_seconds = a.timeout;
  cfg.fallback = !a.no_fallback;
  LogSink sink;
  if (!g.quiet) sink = [&err](std::string_view line) { err << line << "\n"; };
  const Refiner refiner(cfg, sink);
  const auto result = refiner.refine_or_fallback(a.prompt);
  out << result.text << "\n";
  if (!g.quiet && !result.refined) err << "refine: result is unrefined" << (result.error.empty() ? "" : ": " + result.error) << "\n";
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Physics-driven deformation and rendering of Gaussian splat clouds", "splatdyn"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::Range(1, 1024));
  app.add_flag("--deterministic,!--no-deterministic", g.deterministic,
               "bit-reproducible transfers for any thread count (default on)");
  app.add_option("--output-dir", g.output_dir, "output directory override");
  app.add_flag("--quiet", g.quiet, "no progress output");

  std::string config_path, ply_path, camera_path, render_output;
  auto* simulate = app.add_subcommand("simulate", "run a scene config and write frames");
  simulate->add_option("config", config_path, "scene config (YAML)")->required();

  auto* render = app.add_subcommand("render", "render the undeformed cloud once");
  render->add_option("ply", ply_path, "splat PLY")->required();
  render->add_option("camera", camera_path, "camera config (YAML)")->required();
  render->add_option("-o,--output", render_output, "image path (.png or .ppm), default render.png");

  auto* validate = app.add_subcommand("validate", "parse a scene config and print the resolved settings");
  validate->add_option("config", config_path, "scene config (YAML)")->required();

  auto* info = app.add_subcommand("info", "print splat count, SH degree and bounds");
  info->add_option("ply", ply_path, "splat PLY")->required();

  RefineArgs ra;
  auto* refine = app.add_subcommand("refine", "refine a text prompt via a chat-completion service");
  refine->add_option("prompt", ra.prompt, "prompt text")->required();
  refine->add_flag("--offline", ra.offline, "return the prompt unchanged");
  refine->add_option("--endpoint", ra.endpoint, "chat-completion URL (omit for offline)");
  refine->add_option("--model", ra.model, "model identifier");
  refine->add_option("--token-env", ra.token_env, "environment variable holding the bearer token")
      ->capture_default_str();
  refine->add_option("--timeout", ra.timeout, "seconds")->check(CLI::PositiveNumber)->capture_default_str();
  refine->add_flag("--no-fallback", ra.no_fallback, "fail instead of returning the unrefined prompt");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    check_preset_table();
    if (*simulate) return cmd_simulate(g, config_path, out, err);
    if (*render) return cmd_render(g, ply_path, camera_path, render_output, out);
    if (*validate) return cmd_validate(config_path, out);
    if (*info) return cmd_info(ply_path, out);
    if (*refine) return cmd_refine(g, ra, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFault;
  }
  return kExitUsage;
}

}  // namespace splatdyn
