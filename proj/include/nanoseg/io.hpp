#pragma once

#include <filesystem>
#include <string>

#include "nanoseg/pipeline.hpp"
#include "nanoseg/synth.hpp"

namespace nanoseg::io {

/// Malformed or schema-violating JSON document.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Configs are JSON objects whose keys are exactly the struct field names.
// Missing keys keep their defaults; unknown keys raise SchemaError.
PipelineConfig config_from_json(const std::string& text, PipelineConfig base = {});
std::string config_to_json(const PipelineConfig& cfg);
PipelineConfig load_config(const std::filesystem::path& path);

SceneSpec scene_from_json(const std::string& text, SceneSpec base = {});
std::string scene_to_json(const SceneSpec& spec);

/// Report with config echo, statistics and per-particle outlines.
std::string report_to_json(const AnalysisReport& report);
/// Rebuilds an evaluable report; the mask is not stored and comes back empty.
AnalysisReport report_from_json(const std::string& text);

/// Per-particle facts plus a run-length copy of the label map.
std::string truth_to_json(const GroundTruth& gt);
GroundTruth truth_from_json(const std::string& text);

std::string metrics_to_json(const Metrics& m);

/// id,area_px,eq_diameter_px,centroid_x,centroid_y,bbox_x,bbox_y,bbox_w,bbox_h
std::string particles_csv(const AnalysisReport& report);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace nanoseg::io
