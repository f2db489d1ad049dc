#include "dirinv/bvh.hpp"

#include <charconv>
#include <cstddef>

#include "numfmt.hpp"

namespace dirinv {

const char* channel_name(Channel c) {
  switch (c) {
    case Channel::x_position: return "Xposition";
    case Channel::y_position: return "Yposition";
    case Channel::z_position: return "Zposition";
    case Channel::x_rotation: return "Xrotation";
    case Channel::y_rotation: return "Yrotation";
    case Channel::z_rotation: return "Zrotation";
  }
  return "?";
}

int Skeleton::channel_count() const {
  int n = 0;
  for (const auto& j : joints) n += static_cast<int>(j.channels.size());
  return n;
}

int Skeleton::channel_offset(int j) const {
  int n = 0;
  for (int i = 0; i < j; ++i) n += static_cast<int>(joints[i].channels.size());
  return n;
}

namespace {

struct Token {
  std::string_view text;
  int line;
};

struct Tokenizer {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  int last_line = 1;

  bool done() const { return pos >= tokens.size(); }

  const Token& peek() {
    if (done()) throw ParseError(last_line, "unexpected end of input");
    return tokens[pos];
  }

  Token next() {
    if (done()) throw ParseError(last_line, "unexpected end of input");
    return tokens[pos++];
  }

  void expect(std::string_view what) {
    const Token t = next();
    if (t.text != what)
      throw ParseError(t.line, "expected '" + std::string(what) + "', got '" + std::string(t.text) + "'");
  }
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

double parse_double(const Token& t) {
  double v = 0.0;
  const char* begin = t.text.data();
  const char* end = begin + t.text.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw ParseError(t.line, "expected a number, got '" + std::string(t.text) + "'");
  return v;
}

int parse_int(const Token& t) {
  int v = 0;
  const char* begin = t.text.data();
  const char* end = begin + t.text.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw ParseError(t.line, "expected an integer, got '" + std::string(t.text) + "'");
  return v;
}

Channel parse_channel(const Token& t) {
  const std::string_view s = t.text;
  if (s == "Xposition") return Channel::x_position;
  if (s == "Yposition") return Channel::y_position;
  if (s == "Zposition") return Channel::z_position;
  if (s == "Xrotation") return Channel::x_rotation;
  if (s == "Yrotation") return Channel::y_rotation;
  if (s == "Zrotation") return Channel::z_rotation;
  throw ParseError(t.line, "unknown channel name '" + std::string(s) + "'");
}

Vec3 parse_vec3(Tokenizer& tk) {
  const double x = parse_double(tk.next());
  const double y = parse_double(tk.next());
  const double z = parse_double(tk.next());
  return {x, y, z};
}

// Accepts a keyword written either as "Key:" or "Key" ":".
void expect_keyword_colon(Tokenizer& tk, std::string_view key, const std::string& describe) {
  const Token t = tk.next();
  const std::string with_colon = std::string(key) + ":";
  if (t.text == with_colon) return;
  if (t.text == key) {
    const Token c = tk.next();
    if (c.text == ":") return;
    throw ParseError(c.line, "missing " + describe);
  }
  throw ParseError(t.line, "missing " + describe + " (got '" + std::string(t.text) + "')");
}

struct Parser {
  Tokenizer tk;
  std::vector<std::pair<std::string_view, int>> lines;  // text, 1-based line number
  Skeleton skeleton;

  void parse_joint_block(std::string&& name, std::optional<int> parent) {
    tk.expect("{");
    const int index = static_cast<int>(skeleton.joints.size());
    skeleton.joints.push_back(Joint{std::move(name), parent, {}, {}, {}});
    for (;;) {
      const Token t = tk.next();
      if (t.text == "}") break;
      if (t.text == "OFFSET") {
        skeleton.joints[index].offset = parse_vec3(tk);
      } else if (t.text == "CHANNELS") {
        const int n = parse_int(tk.next());
        if (n < 0 || n > 6) throw ParseError(t.line, "channel count out of range");
        auto& channels = skeleton.joints[index].channels;
        for (int i = 0; i < n; ++i) channels.push_back(parse_channel(tk.next()));
      } else if (t.text == "JOINT") {
        const Token name_tok = tk.next();
        parse_joint_block(std::string(name_tok.text), index);
      } else if (t.text == "End") {
        tk.expect("Site");
        if (skeleton.joints[index].end_offset)
          throw ParseError(t.line, "duplicate End Site in joint '" + skeleton.joints[index].name + "'");
        tk.expect("{");
        tk.expect("OFFSET");
        skeleton.joints[index].end_offset = parse_vec3(tk);
        tk.expect("}");
      } else {
        throw ParseError(t.line, "unexpected token '" + std::string(t.text) + "' in joint block");
      }
    }
  }

  MotionClip parse() {
    if (tk.done()) throw ParseError(1, "missing HIERARCHY");
    {
      const Token t = tk.next();
      if (t.text != "HIERARCHY") throw ParseError(t.line, "missing HIERARCHY");
    }
    tk.expect("ROOT");
    {
      const Token name_tok = tk.next();
      parse_joint_block(std::string(name_tok.text), std::nullopt);
    }
    tk.expect("MOTION");
    expect_keyword_colon(tk, "Frames", "frame count ('Frames:')");
    const Token count_tok = tk.peek();
    const int declared = parse_int(tk.next());
    if (declared < 1) throw ParseError(count_tok.line, "frame count must be >= 1");
    {
      const Token t = tk.next();
      if (t.text != "Frame")
        throw ParseError(t.line, "missing Frame Time (got '" + std::string(t.text) + "')");
    }
    expect_keyword_colon(tk, "Time", "Frame Time");
    const Token time_tok = tk.peek();
    const double frame_time = parse_double(tk.next());
    if (!(frame_time > 0.0)) throw ParseError(time_tok.line, "Frame Time must be positive");

    MotionClip clip;
    clip.skeleton = std::move(skeleton);
    clip.frame_time = frame_time;
    const int channels = clip.skeleton.channel_count();

    // Frame rows are line-based: one row per non-empty line after Frame Time.
    std::size_t li = 0;
    while (li < lines.size() && lines[li].second <= time_tok.line) ++li;
    int last_line = time_tok.line;
    for (int f = 0; f < declared; ++f) {
      // Find the next non-blank line.
      std::string_view row_text;
      int row_line = 0;
      for (; li < lines.size(); ++li) {
        std::string_view s = lines[li].first;
        std::size_t a = 0;
        while (a < s.size() && is_space(s[a])) ++a;
        if (a < s.size()) {
          row_text = s;
          row_line = lines[li].second;
          ++li;
          break;
        }
      }
      if (row_text.empty())
        throw ParseError(last_line, "frame " + std::to_string(f + 1) + ": unexpected end of input (declared " +
                                        std::to_string(declared) + " frames)");
      last_line = row_line;

      std::vector<double> row;
      row.reserve(static_cast<std::size_t>(channels));
      std::size_t a = 0;
      while (a < row_text.size()) {
        while (a < row_text.size() && is_space(row_text[a])) ++a;
        if (a >= row_text.size()) break;
        std::size_t b = a;
        while (b < row_text.size() && !is_space(row_text[b])) ++b;
        row.push_back(parse_double(Token{row_text.substr(a, b - a), row_line}));
        a = b;
      }
      if (static_cast<int>(row.size()) != channels)
        throw ParseError(row_line, "frame " + std::to_string(f + 1) + ": expected " + std::to_string(channels) +
                                       " values, got " + std::to_string(row.size()));
      clip.frames.push_back(std::move(row));
    }
    // Anything non-blank after the declared rows is a count mismatch.
    for (; li < lines.size(); ++li) {
      std::string_view s = lines[li].first;
      std::size_t a = 0;
      while (a < s.size() && is_space(s[a])) ++a;
      if (a < s.size())
        throw ParseError(lines[li].second, "unexpected data after frame " + std::to_string(declared));
    }
    return clip;
  }
};

}  // namespace

MotionClip parse_bvh(std::string_view text) {
  if (text.find('\0') != std::string_view::npos)
    throw ParseError(1, "binary input rejected (NUL byte found)");

  Parser parser;
  int line = 1;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      parser.lines.emplace_back(text.substr(start, i - start), line);
      start = i + 1;
      ++line;
    }
  }
  for (const auto& [l, ln] : parser.lines) {
    std::size_t a = 0;
    while (a < l.size()) {
      while (a < l.size() && is_space(l[a])) ++a;
      if (a >= l.size()) break;
      std::size_t b = a;
      while (b < l.size() && !is_space(l[b])) ++b;
      parser.tk.tokens.push_back(Token{l.substr(a, b - a), ln});
      a = b;
    }
  }
  parser.tk.last_line = parser.lines.empty() ? 1 : parser.lines.back().second;
  return parser.parse();
}

namespace {

void write_joint(std::string& out, const MotionClip& clip, int j, int depth) {
  const auto& joints = clip.skeleton.joints;
  const Joint& joint = joints[j];
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  out += pad + (joint.parent ? "JOINT " : "ROOT ") + joint.name + "\n" + pad + "{\n";
  const std::string inner(static_cast<std::size_t>(depth + 1) * 2, ' ');
  out += inner + "OFFSET ";
  detail::append_double(out, joint.offset.x);
  out += ' ';
  detail::append_double(out, joint.offset.y);
  out += ' ';
  detail::append_double(out, joint.offset.z);
  out += '\n';
  out += inner + "CHANNELS " + std::to_string(joint.channels.size());
  for (Channel c : joint.channels) out += std::string(" ") + channel_name(c);
  out += '\n';
  for (std::size_t k = 0; k < joints.size(); ++k) {
    if (joints[k].parent && *joints[k].parent == j) write_joint(out, clip, static_cast<int>(k), depth + 1);
  }
  if (joint.end_offset) {
    out += inner + "End Site\n" + inner + "{\n" + inner + "  OFFSET ";
    detail::append_double(out, joint.end_offset->x);
    out += ' ';
    detail::append_double(out, joint.end_offset->y);
    out += ' ';
    detail::append_double(out, joint.end_offset->z);
    out += '\n' + inner + "}\n";
  }
  out += pad + "}\n";
}

}  // namespace

std::string write_bvh(const MotionClip& clip) {
  std::string out = "HIERARCHY\n";
  write_joint(out, clip, 0, 0);
  out += "MOTION\nFrames: " + std::to_string(clip.frame_count()) + "\nFrame Time: ";
  detail::append_double(out, clip.frame_time);
  out += '\n';
  for (const auto& row : clip.frames) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ' ';
      detail::append_double(out, row[i]);
    }
    out += '\n';
  }
  return out;
}

MotionClip decimate(const MotionClip& clip, int stride) {
  if (stride < 1) throw std::invalid_argument("decimate: stride must be >= 1");
  MotionClip out;
  out.skeleton = clip.skeleton;
  out.frame_time = clip.frame_time * stride;
  for (int f = 0; f < clip.frame_count(); f += stride) out.frames.push_back(clip.frames[f]);
  return out;
}

namespace {

UnitVec3 channel_axis(Channel c) {
  switch (c) {
    case Channel::x_rotation: return UnitVec3::axis_x();
    case Channel::y_rotation: return UnitVec3::axis_y();
    default: return UnitVec3::axis_z();
  }
}

constexpr double kDegToRad = kPi / 180.0;

}  // namespace

Orientation joint_rotation(const MotionClip& clip, const std::vector<double>& row, int j) {
  const Joint& joint = clip.skeleton.joints[j];
  const int off = clip.skeleton.channel_offset(j);
  Orientation q = Orientation::identity();
  for (std::size_t k = 0; k < joint.channels.size(); ++k) {
    const Channel c = joint.channels[k];
    if (!is_rotation(c)) continue;
    q = compose(q, Orientation::from_axis_angle(channel_axis(c), row[off + k] * kDegToRad));
  }
  return q;
}

std::vector<JointPose> forward_kinematics(const MotionClip& clip, int frame) {
  if (frame < 0 || frame >= clip.frame_count())
    throw std::out_of_range("forward_kinematics: frame index out of range");
  const auto& row = clip.frames[frame];
  const auto& joints = clip.skeleton.joints;
  std::vector<JointPose> poses(joints.size());
  for (std::size_t j = 0; j < joints.size(); ++j) {
    const Joint& joint = joints[j];
    const int off = clip.skeleton.channel_offset(static_cast<int>(j));
    Vec3 translation;
    for (std::size_t k = 0; k < joint.channels.size(); ++k) {
      const double v = row[off + k];
      switch (joint.channels[k]) {
        case Channel::x_position: translation.x += v; break;
        case Channel::y_position: translation.y += v; break;
        case Channel::z_position: translation.z += v; break;
        default: break;
      }
    }
    const Orientation local = joint_rotation(clip, row, static_cast<int>(j));
    if (!joint.parent) {
      poses[j] = {translation, local};
    } else {
      const JointPose& pp = poses[static_cast<std::size_t>(*joint.parent)];
      poses[j].orientation = compose(pp.orientation, local);
      poses[j].position = pp.position + rotate(pp.orientation, joint.offset + translation);
    }
  }
  return poses;
}

RootTrajectory root_trajectory(const MotionClip& clip, double unit_scale) {
  const Joint& root = clip.skeleton.joints.at(0);
  int rotations = 0;
  for (Channel c : root.channels)
    if (is_rotation(c)) ++rotations;
  if (rotations != 3)
    throw std::invalid_argument("root_trajectory: root must have exactly three rotation channels");

  RootTrajectory out;
  out.frame_time = clip.frame_time;
  out.orientations.reserve(clip.frames.size());
  out.positions.reserve(clip.frames.size());
  const int off = 0;  // root is joint 0, channels start at 0
  for (const auto& row : clip.frames) {
    Vec3 translation;
    for (std::size_t k = 0; k < root.channels.size(); ++k) {
      const double v = row[off + static_cast<int>(k)];
      switch (root.channels[k]) {
        case Channel::x_position: translation.x += v; break;
        case Channel::y_position: translation.y += v; break;
        case Channel::z_position: translation.z += v; break;
        default: break;
      }
    }
    out.orientations.push_back(joint_rotation(clip, row, 0));
    out.positions.push_back(unit_scale * translation);
  }
  hemisphere_align(out.orientations);
  return out;
}

}  // namespace dirinv
