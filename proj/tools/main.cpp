// dirinv: remove the redundant vertical-axis rotation from BVH motion data,
// pick robust motion directions, export direction-invariant features, and
// dump singularity diagnostics for plotting.

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dirinv/bvh.hpp"
#include "dirinv/export.hpp"
#include "dirinv/features.hpp"
#include "dirinv/mapping.hpp"
#include "dirinv/motiondir.hpp"

namespace fs = std::filesystem;
using namespace dirinv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ToleranceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt_fixed(double v, int precision) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> collect_inputs(const std::string& input) {
  const fs::path p(input);
  if (!fs::exists(p)) throw UsageError("cannot open '" + input + "': no such file or directory");
  if (!fs::is_directory(p)) return {p};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(p)) {
    if (entry.is_regular_file() && entry.path().extension() == ".bvh") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.string() < b.string(); });
  if (files.empty()) throw UsageError("no .bvh files in directory '" + input + "'");
  return files;
}

MotionClip load_clip(const fs::path& path, int stride) {
  MotionClip clip;
  try {
    clip = parse_bvh(read_file(path));
  } catch (const ParseError& e) {
    // ParseError::what() already starts with the line number.
    throw UsageError(path.string() + ":" + e.what());
  }
  if (stride > 1) clip = decimate(clip, stride);
  return clip;
}

// --- direction selector -----------------------------------------------------

struct DirSelector {
  enum class Kind { x_axis, z_axis, automatic, explicit_vec } kind = Kind::automatic;
  UnitVec3 direction;
  std::string raw = "auto";
};

DirSelector parse_selector(const std::string& s) {
  DirSelector sel;
  sel.raw = s;
  if (s == "x") {
    sel.kind = DirSelector::Kind::x_axis;
    sel.direction = UnitVec3::axis_x();
    return sel;
  }
  if (s == "z") {
    sel.kind = DirSelector::Kind::z_axis;
    sel.direction = UnitVec3::axis_z();
    return sel;
  }
  if (s == "auto") {
    sel.kind = DirSelector::Kind::automatic;
    return sel;
  }
  std::array<double, 3> v{};
  std::size_t part = 0;
  std::size_t begin = 0;
  while (part < 3) {
    const std::size_t comma = s.find(',', begin);
    const std::string tok = s.substr(begin, comma == std::string::npos ? std::string::npos : comma - begin);
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (std::from_chars(first, last, v[part]).ptr != last)
      throw UsageError("invalid direction '" + s + "' (use x, z, auto or \"x,y,z\")");
    ++part;
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  if (part != 3) throw UsageError("invalid direction '" + s + "' (use x, z, auto or \"x,y,z\")");
  try {
    sel.direction = UnitVec3::normalized({v[0], v[1], v[2]});
  } catch (const std::invalid_argument&) {
    throw UsageError("direction '" + s + "' is too close to the zero vector");
  }
  sel.kind = DirSelector::Kind::explicit_vec;
  return sel;
}

std::string selector_label(const DirSelector& sel) {
  std::string label;
  for (char c : sel.raw) label += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return label;
}

DirectionReport resolve_direction(const DirSelector& sel, const RootTrajectory& traj, int samples,
                                  bool ladder, double threshold) {
  switch (sel.kind) {
    case DirSelector::Kind::x_axis: return evaluate_direction(traj, sel.direction, "x-axis");
    case DirSelector::Kind::z_axis: return evaluate_direction(traj, sel.direction, "z-axis");
    case DirSelector::Kind::explicit_vec: return evaluate_direction(traj, sel.direction, "explicit");
    case DirSelector::Kind::automatic: break;
  }
  if (ladder) return fallback_ladder(traj, threshold, samples);
  return select_motion_direction(traj, samples);
}

// --- output paths ------------------------------------------------------------

fs::path default_output_dir() {
  if (const char* env = std::getenv("DIRINV_OUTPUT_DIR"); env && *env) return fs::path(env);
  return fs::path(".");
}

// Output file for one input: honor --output for single-file runs, otherwise
// derive <dir>/<stem><suffix>.
fs::path output_path(const std::string& output_flag, bool single_input, const fs::path& input,
                     const std::string& suffix) {
  if (!output_flag.empty()) {
    if (single_input) return fs::path(output_flag);
    return fs::path(output_flag) / (input.stem().string() + suffix);
  }
  return default_output_dir() / (input.stem().string() + suffix);
}

}  // namespace

// --- subcommands -------------------------------------------------------------

namespace {

int cmd_inspect(const std::string& input) {
  bool failed = false;
  for (const fs::path& path : collect_inputs(input)) {
    try {
      const MotionClip clip = parse_bvh(read_file(path));
      std::string line = path.string() + ": " + std::to_string(clip.skeleton.joints.size()) + " joints, " +
                         std::to_string(clip.skeleton.channel_count()) + " channels, " +
                         std::to_string(clip.frame_count()) + " frames, " + fmt_fixed(clip.fps(), 1) +
                         " fps, " + fmt_fixed(clip.duration(), 3) + " s";
      std::cout << line << "\n";
      for (const Joint& j : clip.skeleton.joints) {
        std::cout << "  " << j.name;
        if (j.parent) std::cout << " (" << clip.skeleton.joints[*j.parent].name << ")";
        std::cout << ":";
        for (Channel c : j.channels) std::cout << ' ' << channel_name(c);
        if (j.channels.empty()) std::cout << " -";
        std::cout << "\n";
      }
    } catch (const ParseError& e) {
      std::cerr << path.string() << ":" << e.line() << ": error: " << e.what() << "\n";
      failed = true;
    }
  }
  return failed ? kExitUsage : kExitOk;
}

int cmd_select_dir(const std::string& input, const std::string& dir, int samples, double unit_scale,
                   int stride, bool ladder, double threshold, const std::string& output) {
  const DirSelector sel = parse_selector(dir);
  const auto inputs = collect_inputs(input);
  for (const fs::path& path : inputs) {
    const MotionClip clip = load_clip(path, stride);
    const RootTrajectory traj = root_trajectory(clip, unit_scale);
    const DirectionReport report = resolve_direction(sel, traj, samples, ladder, threshold);

    std::string text = "input: " + path.string() + "\n" + direction_report_text(report);
    const DirectionReport x = evaluate_direction(traj, UnitVec3::axis_x(), "x-axis");
    const DirectionReport z = evaluate_direction(traj, UnitVec3::axis_z(), "z-axis");
    text += "x-axis clearance: " + fmt(x.clearance) + " rad (" + fmt(x.clearance * 180.0 / kPi) + " deg)\n";
    text += "z-axis clearance: " + fmt(z.clearance) + " rad (" + fmt(z.clearance * 180.0 / kPi) + " deg)\n";

    std::cout << text;
    if (!output.empty()) {
      const fs::path out = output_path(output, inputs.size() == 1, path, "_direction.txt");
      write_file_atomic(out, text);
    }
  }
  return kExitOk;
}

struct FeatureArgs {
  std::string input;
  std::string scheme;
  std::string dir = "auto";
  bool dir_given = false;
  int samples = 1024;
  double unit_scale = 0.01;
  int stride = 1;
  bool ladder = false;
  double threshold = kPi / 6;
  double epsilon_sing = 1e-3;
  std::string output;
  std::string format = "csv";
  std::string columns;
};

std::vector<std::string> split_columns(const std::string& columns) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (begin <= columns.size() && !columns.empty()) {
    const std::size_t comma = columns.find(',', begin);
    out.push_back(columns.substr(begin, comma == std::string::npos ? std::string::npos : comma - begin));
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return out;
}

int cmd_features(const FeatureArgs& args) {
  if (args.scheme != "gf" && args.scheme != "dif" && args.scheme != "dim")
    throw UsageError("--scheme must be gf, dif or dim");
  if (args.dir_given && args.scheme != "dim")
    throw UsageError("--dir applies to --scheme dim only (dif always uses the facing direction)");
  const std::vector<std::string> columns = split_columns(args.columns);

  const auto inputs = collect_inputs(args.input);
  for (const fs::path& path : inputs) {
    const MotionClip clip = load_clip(path, args.stride);

    std::optional<MappingScheme> scheme;
    FeatureMetadata meta;
    meta.source = path.string();
    meta.unit_scale = args.unit_scale;
    if (args.scheme == "dif") {
      scheme.emplace(UnitVec3::axis_x(), args.epsilon_sing);
      const RootTrajectory traj = root_trajectory(clip, args.unit_scale);
      meta.direction = UnitVec3::axis_x();
      meta.clearance = evaluate_direction(traj, UnitVec3::axis_x()).clearance;
      meta.scheme = FeatureScheme::dif;
    } else if (args.scheme == "dim") {
      const DirSelector sel = parse_selector(args.dir);
      const RootTrajectory traj = root_trajectory(clip, args.unit_scale);
      const DirectionReport report =
          resolve_direction(sel, traj, args.samples, args.ladder, args.threshold);
      scheme.emplace(report.direction, args.epsilon_sing);
      meta.direction = report.direction;
      meta.clearance = report.clearance;
      if (report.samples > 0) meta.samples = report.samples;
      meta.scheme = FeatureScheme::dim;
    } else {
      meta.scheme = FeatureScheme::gf;
    }

    const auto frames = extract_features(clip, scheme, ExtractOptions{args.unit_scale});
    if (!frames.empty()) meta.scheme = frames.front().scheme;  // dim with r=X reduces to dif
    meta.frame_time = clip.frame_time;
    meta.frames = clip.frame_count();
    for (const FeatureFrame& f : frames) meta.singular_frames += f.singular ? 1 : 0;

    const bool jsonl = args.format == "jsonl";
    if (!jsonl && args.format != "csv") throw UsageError("--format must be csv or jsonl");
    const std::string payload = jsonl ? feature_jsonl(frames, clip.skeleton, columns)
                                      : feature_csv(frames, clip.skeleton, columns);
    const std::string suffix = "_" + std::string(scheme_name(meta.scheme)) + (jsonl ? ".jsonl" : ".csv");
    const fs::path out = output_path(args.output, inputs.size() == 1, path, suffix);
    write_file_atomic(out, payload);
    write_file_atomic(out.string() + ".meta.json", metadata_json(meta));
    if (meta.singular_frames > 0)
      std::cerr << path.string() << ": " << meta.singular_frames << " singular frames flagged\n";
    std::cout << out.string() << "\n";
  }
  return kExitOk;
}

int cmd_singularity(const std::string& input, const std::vector<std::string>& dirs, int samples,
                    double unit_scale, int stride, bool ladder, double threshold,
                    const std::string& output) {
  const auto inputs = collect_inputs(input);
  for (const fs::path& path : inputs) {
    const MotionClip clip = load_clip(path, stride);
    const RootTrajectory traj = root_trajectory(clip, unit_scale);
    for (const std::string& d : dirs) {
      const DirSelector sel = parse_selector(d);
      const DirectionReport report = resolve_direction(sel, traj, samples, ladder, threshold);
      const std::string payload = profile_csv(clearance_profile(traj, report.direction), traj.frame_time);
      const bool single = inputs.size() == 1 && dirs.size() == 1;
      const std::string suffix = "_clearance_" + selector_label(sel) + ".csv";
      const fs::path out = output_path(output, single, path, suffix);
      write_file_atomic(out, payload);
      std::cout << out.string() << "\n";
    }
  }
  return kExitOk;
}

int cmd_field(const std::string& input, const std::string& dir, int samples, double unit_scale,
              int stride, double epsilon_sing, const std::string& output) {
  const DirSelector sel = parse_selector(dir);
  std::optional<RootTrajectory> traj;
  fs::path source;
  if (!input.empty()) {
    source = collect_inputs(input).front();
    traj = root_trajectory(load_clip(source, stride), unit_scale);
  } else if (sel.kind == DirSelector::Kind::automatic) {
    throw UsageError("--dir auto requires --input to select a direction from");
  }

  DirectionReport report;
  if (sel.kind == DirSelector::Kind::automatic) {
    report = select_motion_direction(*traj, samples);
  } else {
    report.direction = sel.direction;
  }
  const MappingScheme scheme(report.direction, epsilon_sing);
  const auto field = tangent_field(scheme, sample_sphere(samples));
  const std::vector<UnitVec3> trace = traj ? orbit_trace(traj->orientations) : std::vector<UnitVec3>{};
  const std::string payload = field_csv(field, scheme, trace);

  fs::path out;
  if (!output.empty()) {
    out = fs::path(output);
  } else if (!source.empty()) {
    out = default_output_dir() / (source.stem().string() + "_field_" + selector_label(sel) + ".csv");
  } else {
    out = default_output_dir() / ("field_" + selector_label(sel) + ".csv");
  }
  write_file_atomic(out, payload);
  std::cout << out.string() << "\n";
  return kExitOk;
}

int cmd_roundtrip(const std::string& input, const std::string& scheme_name_arg, const std::string& dir,
                  int samples, double unit_scale, int stride, bool ladder, double ladder_threshold,
                  double epsilon_sing, double tolerance) {
  if (scheme_name_arg == "gf")
    throw UsageError("roundtrip requires dif or dim (gf features carry no yaw rate to integrate)");
  if (scheme_name_arg != "dif" && scheme_name_arg != "dim")
    throw UsageError("--scheme must be dif or dim");

  bool failed = false;
  const auto inputs = collect_inputs(input);
  for (const fs::path& path : inputs) {
    const MotionClip clip = load_clip(path, stride);
    const RootTrajectory traj = root_trajectory(clip, unit_scale);

    UnitVec3 direction = UnitVec3::axis_x();
    if (scheme_name_arg == "dim") {
      const DirSelector sel = parse_selector(dir);
      direction = resolve_direction(sel, traj, samples, ladder, ladder_threshold).direction;
    }
    const auto frames =
        extract_features(clip, MappingScheme(direction, epsilon_sing), ExtractOptions{unit_scale});
    const RootTrajectory back = reconstruct_trajectory(
        frames, frames.front().yaw_angle, PlanarPoint{traj.positions[0].x, traj.positions[0].z});

    double worst_pos = 0.0;
    double worst_rot = 0.0;
    for (int t = 0; t < traj.frame_count(); ++t) {
      worst_pos = std::max(worst_pos, norm(back.positions[t] - traj.positions[t]));
      worst_rot = std::max(worst_rot, rotation_distance(back.orientations[t], traj.orientations[t]));
    }
    std::cout << path.string() << ": max position error: " << fmt(worst_pos)
              << " m, max orientation error: " << fmt(worst_rot) << " rad\n";
    if (worst_pos > tolerance || worst_rot > tolerance) {
      std::cerr << path.string() << ": roundtrip error above tolerance " << fmt(tolerance) << "\n";
      failed = true;
    }
  }
  return failed ? kExitTolerance : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Direction-invariant motion feature toolkit for BVH clips"};
  app.require_subcommand(1);

  // inspect
  auto* inspect = app.add_subcommand("inspect", "Print clip summary and channel layout");
  std::string in_input;
  inspect->add_option("--input", in_input, "BVH file or directory")->required();

  // select-dir
  auto* select = app.add_subcommand("select-dir", "Choose a motion direction for a clip");
  std::string sd_input, sd_dir = "auto", sd_output;
  int sd_samples = 1024, sd_stride = 1;
  double sd_unit = 0.01, sd_threshold = kPi / 6;
  bool sd_ladder = false;
  select->add_option("--input", sd_input, "BVH file or directory")->required();
  select->add_option("--dir", sd_dir, "x | z | auto | \"x,y,z\" (default auto)");
  select->add_option("--samples", sd_samples, "sphere lattice size (default 1024)");
  select->add_option("--unit-scale", sd_unit, "file units to meters (default 0.01)");
  select->add_option("--stride", sd_stride, "frame decimation stride (default 1)");
  select->add_flag("--ladder", sd_ladder, "try X, then Z, then the lattice search");
  select->add_option("--threshold", sd_threshold, "ladder acceptance clearance in radians (default pi/6)");
  select->add_option("--output", sd_output, "also write the report to this path");

  // features
  auto* features = app.add_subcommand("features", "Export GF/DIF/DIM feature files");
  FeatureArgs fa;
  features->add_option("--input", fa.input, "BVH file or directory")->required();
  features->add_option("--scheme", fa.scheme, "gf | dif | dim")->required();
  auto* fa_dir = features->add_option("--dir", fa.dir, "motion direction for dim (x | z | auto | \"x,y,z\")");
  features->add_option("--samples", fa.samples, "sphere lattice size (default 1024)");
  features->add_option("--unit-scale", fa.unit_scale, "file units to meters (default 0.01)");
  features->add_option("--stride", fa.stride, "frame decimation stride (default 1)");
  features->add_flag("--ladder", fa.ladder, "use the X/Z/auto ladder for --dir auto");
  features->add_option("--threshold", fa.threshold, "ladder acceptance clearance in radians");
  features->add_option("--epsilon-sing", fa.epsilon_sing, "singularity threshold in radians (default 1e-3)");
  features->add_option("--output", fa.output, "output file (single input) or directory");
  features->add_option("--format", fa.format, "csv | jsonl (default csv)");
  features->add_option("--columns", fa.columns, "comma-separated channel subset to export");

  // singularity
  auto* singularity = app.add_subcommand("singularity", "Per-frame clearance profiles");
  std::string sg_input, sg_output;
  std::vector<std::string> sg_dirs;
  int sg_samples = 1024, sg_stride = 1;
  double sg_unit = 0.01, sg_threshold = kPi / 6;
  bool sg_ladder = false;
  singularity->add_option("--input", sg_input, "BVH file or directory")->required();
  singularity->add_option("--dir", sg_dirs, "candidate direction (repeatable)")->required();
  singularity->add_option("--samples", sg_samples, "sphere lattice size for auto (default 1024)");
  singularity->add_option("--unit-scale", sg_unit, "file units to meters (default 0.01)");
  singularity->add_option("--stride", sg_stride, "frame decimation stride (default 1)");
  singularity->add_flag("--ladder", sg_ladder, "use the X/Z/auto ladder for auto");
  singularity->add_option("--threshold", sg_threshold, "ladder acceptance clearance in radians");
  singularity->add_option("--output", sg_output, "output file (single input+dir) or directory");

  // field
  auto* field = app.add_subcommand("field", "Tangent-field lattice export for plotting");
  std::string fl_input, fl_dir, fl_output;
  int fl_samples = 1024, fl_stride = 1;
  double fl_unit = 0.01, fl_eps = 1e-3;
  field->add_option("--input", fl_input, "optional BVH clip whose orbit trace is appended");
  field->add_option("--dir", fl_dir, "x | z | auto | \"x,y,z\"")->required();
  field->add_option("--samples", fl_samples, "sphere lattice size (default 1024)");
  field->add_option("--unit-scale", fl_unit, "file units to meters (default 0.01)");
  field->add_option("--stride", fl_stride, "frame decimation stride (default 1)");
  field->add_option("--epsilon-sing", fl_eps, "singular marker threshold in radians (default 1e-3)");
  field->add_option("--output", fl_output, "output file");

  // roundtrip
  auto* roundtrip = app.add_subcommand("roundtrip", "Extract, reintegrate and report drift");
  std::string rt_input, rt_scheme = "dif", rt_dir = "auto";
  int rt_samples = 1024, rt_stride = 1;
  double rt_unit = 0.01, rt_ladder_threshold = kPi / 6, rt_eps = 1e-3, rt_tolerance = 5e-3;
  bool rt_ladder = false;
  roundtrip->add_option("--input", rt_input, "BVH file or directory")->required();
  roundtrip->add_option("--scheme", rt_scheme, "dif | dim (default dif)");
  roundtrip->add_option("--dir", rt_dir, "motion direction for dim");
  roundtrip->add_option("--samples", rt_samples, "sphere lattice size (default 1024)");
  roundtrip->add_option("--unit-scale", rt_unit, "file units to meters (default 0.01)");
  roundtrip->add_option("--stride", rt_stride, "frame decimation stride (default 1)");
  roundtrip->add_flag("--ladder", rt_ladder, "use the X/Z/auto ladder for --dir auto");
  roundtrip->add_option("--epsilon-sing", rt_eps, "singularity threshold in radians (default 1e-3)");
  roundtrip->add_option("--threshold", rt_tolerance, "max tolerated error in meters/radians (default 5e-3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*inspect) return cmd_inspect(in_input);
    if (*select)
      return cmd_select_dir(sd_input, sd_dir, sd_samples, sd_unit, sd_stride, sd_ladder, sd_threshold,
                            sd_output);
    if (*features) {
      fa.dir_given = fa_dir->count() > 0;
      return cmd_features(fa);
    }
    if (*singularity)
      return cmd_singularity(sg_input, sg_dirs, sg_samples, sg_unit, sg_stride, sg_ladder, sg_threshold,
                             sg_output);
    if (*field) return cmd_field(fl_input, fl_dir, fl_samples, fl_unit, fl_stride, fl_eps, fl_output);
    if (*roundtrip)
      return cmd_roundtrip(rt_input, rt_scheme, rt_dir, rt_samples, rt_unit, rt_stride, rt_ladder,
                           rt_ladder_threshold, rt_eps, rt_tolerance);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ToleranceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTolerance;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
