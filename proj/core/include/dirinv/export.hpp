#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dirinv/features.hpp"
#include "dirinv/mapping.hpp"

namespace dirinv {

/// Feature CSV: header "scheme,frame,time,<channels...>,sing_flag", '\n' line
/// endings and '.' decimal separator regardless of locale. A non-empty
/// `columns` list keeps only those channels (identity columns and sing_flag
/// always stay); unknown names throw.
std::string feature_csv(const std::vector<FeatureFrame>& frames, const Skeleton& skeleton,
                        const std::vector<std::string>& columns = {});

/// JSON lines, one object per frame, same keys as the CSV columns.
std::string feature_jsonl(const std::vector<FeatureFrame>& frames, const Skeleton& skeleton,
                          const std::vector<std::string>& columns = {});

/// Tangent-field CSV: "record,qx,qy,qz,tx,ty,tz,singular". Lattice samples
/// come first (record=field), then the scheme's two analytic singular points
/// as explicit singular field records, then the optional orbit-sphere
/// trajectory points (record=traj, flagged singular when inside the scheme
/// threshold).
std::string field_csv(const std::vector<FieldSample>& field, const MappingScheme& scheme,
                      const std::vector<UnitVec3>& trajectory = {});

/// Two-column profile: "time,clearance" in seconds and radians.
std::string profile_csv(const std::vector<double>& profile, double frame_time);

struct FeatureMetadata {
  std::string source;
  FeatureScheme scheme = FeatureScheme::gf;
  std::optional<UnitVec3> direction;
  std::optional<double> clearance;
  std::optional<int> samples;
  double unit_scale = 0.01;
  double frame_time = 0.0;
  int frames = 0;
  int singular_frames = 0;
};

/// Deterministic metadata sidecar (no timestamps).
std::string metadata_json(const FeatureMetadata& meta);

/// Writes to a temporary file in the target directory, then renames over the
/// destination.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace dirinv
