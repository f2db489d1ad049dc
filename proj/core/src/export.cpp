#include "dirinv/export.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "numfmt.hpp"

namespace dirinv {

namespace {

// Indices of the channels kept by a column filter, in canonical order.
std::vector<std::size_t> kept_indices(const std::vector<std::string>& names,
                                      const std::vector<std::string>& columns) {
  std::vector<std::size_t> kept;
  if (columns.empty()) {
    kept.resize(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) kept[i] = i;
    return kept;
  }
  for (const std::string& c : columns) {
    if (std::find(names.begin(), names.end(), c) == names.end())
      throw std::invalid_argument("unknown column '" + c + "'");
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (std::find(columns.begin(), columns.end(), names[i]) != columns.end()) kept.push_back(i);
  }
  return kept;
}

}  // namespace

std::string feature_csv(const std::vector<FeatureFrame>& frames, const Skeleton& skeleton,
                        const std::vector<std::string>& columns) {
  if (frames.empty()) throw std::invalid_argument("feature_csv: no frames");
  const auto names = feature_channel_names(skeleton, frames.front().scheme);
  const auto kept = kept_indices(names, columns);

  std::string out = "scheme,frame,time";
  for (std::size_t i : kept) out += "," + names[i];
  out += ",sing_flag\n";

  for (const FeatureFrame& f : frames) {
    out += scheme_name(f.scheme);
    out += ',' + std::to_string(f.frame) + ',';
    detail::append_double(out, f.time);
    const auto values = feature_channel_values(f);
    for (std::size_t i : kept) {
      out += ',';
      detail::append_double(out, values[i]);
    }
    out += f.singular ? ",1\n" : ",0\n";
  }
  return out;
}

std::string feature_jsonl(const std::vector<FeatureFrame>& frames, const Skeleton& skeleton,
                          const std::vector<std::string>& columns) {
  if (frames.empty()) throw std::invalid_argument("feature_jsonl: no frames");
  const auto names = feature_channel_names(skeleton, frames.front().scheme);
  const auto kept = kept_indices(names, columns);

  std::string out;
  for (const FeatureFrame& f : frames) {
    nlohmann::ordered_json obj;
    obj["scheme"] = scheme_name(f.scheme);
    obj["frame"] = f.frame;
    obj["time"] = f.time;
    const auto values = feature_channel_values(f);
    for (std::size_t i : kept) obj[names[i]] = values[i];
    obj["sing_flag"] = f.singular;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

namespace {

void append_field_row(std::string& out, const char* record, const Vec3& q, const Vec3& t, bool singular) {
  out += record;
  for (const double v : {q.x, q.y, q.z, t.x, t.y, t.z}) {
    out += ',';
    dirinv::detail::append_double(out, v);
  }
  out += singular ? ",1\n" : ",0\n";
}

}  // namespace

std::string field_csv(const std::vector<FieldSample>& field, const MappingScheme& scheme,
                      const std::vector<UnitVec3>& trajectory) {
  std::string out = "record,qx,qy,qz,tx,ty,tz,singular\n";
  for (const FieldSample& s : field) append_field_row(out, "field", s.point.vec(), s.tangent, s.singular);
  // The scheme's two analytic singular points, so plots carry them even when
  // no lattice point falls inside the threshold.
  append_field_row(out, "field", scheme.direction.vec(), Vec3{}, true);
  append_field_row(out, "field", scheme.direction.negated().vec(), Vec3{}, true);
  for (const UnitVec3& q : trajectory) {
    const double d = std::min(geodesic_distance(q, scheme.direction),
                              geodesic_distance(q, scheme.direction.negated()));
    append_field_row(out, "traj", q.vec(), Vec3{}, d < scheme.epsilon_sing);
  }
  return out;
}

std::string profile_csv(const std::vector<double>& profile, double frame_time) {
  std::string out = "time,clearance\n";
  for (std::size_t t = 0; t < profile.size(); ++t) {
    detail::append_double(out, static_cast<double>(t) * frame_time);
    out += ',';
    detail::append_double(out, profile[t]);
    out += '\n';
  }
  return out;
}

std::string metadata_json(const FeatureMetadata& meta) {
  nlohmann::ordered_json j;
  j["source"] = meta.source;
  j["scheme"] = scheme_name(meta.scheme);
  if (meta.direction) {
    j["direction"] = {meta.direction->x(), meta.direction->y(), meta.direction->z()};
  } else {
    j["direction"] = nullptr;
  }
  if (meta.clearance) {
    j["clearance_rad"] = *meta.clearance;
    j["clearance_deg"] = *meta.clearance * 180.0 / kPi;
  } else {
    j["clearance_rad"] = nullptr;
    j["clearance_deg"] = nullptr;
  }
  j["samples"] = meta.samples ? nlohmann::ordered_json(*meta.samples) : nlohmann::ordered_json(nullptr);
  j["unit_scale"] = meta.unit_scale;
  j["frame_time"] = meta.frame_time;
  j["fps"] = meta.frame_time > 0.0 ? 1.0 / meta.frame_time : 0.0;
  j["frames"] = meta.frames;
  j["singular_frames"] = meta.singular_frames;
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace dirinv
