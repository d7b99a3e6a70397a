#include "nanoseg/io.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>

#include "json.hpp"
#include "nanoseg/netpbm.hpp"

namespace nanoseg::io {

using Json = nlohmann::ordered_json;

namespace {

Json parse(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

// Applies one handler per present key and rejects keys without a handler.
class Fields {
 public:
  Fields(const Json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw SchemaError(where_ + ": expected a JSON object");
  }

  Fields& on(const std::string& key, const std::function<void(const Json&)>& fn) {
    known_.push_back(key);
    if (auto it = obj_.find(key); it != obj_.end()) {
      try {
        fn(*it);
      } catch (const Json::exception& e) {
        throw SchemaError(where_ + "." + key + ": " + e.what());
      } catch (const SchemaError& e) {
        // Nested objects already name their own path.
        const std::string msg = e.what();
        if (msg.starts_with(where_)) throw;
        throw SchemaError(where_ + "." + key + ": " + msg);
      }
    }
    return *this;
  }

  void done() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (std::find(known_.begin(), known_.end(), it.key()) == known_.end()) {
        throw SchemaError(where_ + ": unknown key '" + it.key() + "'");
      }
    }
  }

 private:
  const Json& obj_;
  std::string where_;
  std::vector<std::string> known_;
};

template <typename T>
T get_as(const Json& j) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!j.is_boolean()) throw SchemaError("expected a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_integer()) throw SchemaError("expected an integer");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!j.is_number()) throw SchemaError("expected a number");
  } else {
    if (!j.is_string()) throw SchemaError("expected a string");
  }
  return j.get<T>();
}

template <typename T>
auto assign(T& target) {
  return [&target](const Json& j) { target = get_as<T>(j); };
}

template <typename E>
E enum_from(const Json& j, const std::vector<std::pair<std::string, E>>& names) {
  const auto s = get_as<std::string>(j);
  for (const auto& [n, v] : names) {
    if (n == s) return v;
  }
  std::string all;
  for (const auto& [n, v] : names) all += (all.empty() ? "" : ", ") + n;
  throw SchemaError("unknown value '" + s + "' (expected one of " + all + ")");
}

template <typename E>
std::string enum_name(E v, const std::vector<std::pair<std::string, E>>& names) {
  for (const auto& [n, e] : names) {
    if (e == v) return n;
  }
  return "?";
}

const std::vector<std::pair<std::string, SmoothingMethod>> kSmoothingNames{
    {"none", SmoothingMethod::None},
    {"mean", SmoothingMethod::Mean},
    {"gaussian", SmoothingMethod::Gaussian},
    {"median", SmoothingMethod::Median}};

const std::vector<std::pair<std::string, Weighting>> kWeightingNames{
    {"mean", Weighting::Mean}, {"gaussian", Weighting::Gaussian}};

const std::vector<std::pair<std::string, Method>> kMethodNames{
    {"conventional", Method::Conventional}, {"superposition", Method::Superposition}};

auto structuring_element(StructuringElement& se, const std::string& where) {
  return [&se, where](const Json& j) {
    Fields(j, where).on("width", assign(se.width)).on("height", assign(se.height)).done();
  };
}

Json se_json(StructuringElement se) { return {{"width", se.width}, {"height", se.height}}; }

Json config_json(const PipelineConfig& cfg) {
  Json j;
  j["smoothing"] = {{"method", enum_name(cfg.smoothing.method, kSmoothingNames)},
                    {"kernel_size", cfg.smoothing.kernel_size}};
  j["equalize"] = cfg.equalize;
  j["binary_t"] = cfg.binary_t;
  j["adaptive"] = {{"block", cfg.adaptive.block},
                   {"offset_d", cfg.adaptive.offset_d},
                   {"weighting", enum_name(cfg.adaptive.weighting, kWeightingNames)}};
  j["open_se"] = se_json(cfg.open_se);
  j["open_iters"] = cfg.open_iters;
  j["close_se"] = se_json(cfg.close_se);
  j["close_iters"] = cfg.close_iters;
  j["area_policy"] = {{"absolute_min", cfg.area_policy.absolute_min},
                      {"relative_fraction", cfg.area_policy.relative_fraction}};
  j["exclude_border_particles"] = cfg.exclude_border_particles;
  j["histogram_bin_width"] = cfg.histogram_bin_width;
  return j;
}

PipelineConfig config_from(const Json& root, PipelineConfig cfg) {
  Fields(root, "config")
      .on("smoothing",
          [&](const Json& j) {
            Fields(j, "config.smoothing")
                .on("method",
                    [&](const Json& m) { cfg.smoothing.method = enum_from(m, kSmoothingNames); })
                .on("kernel_size", assign(cfg.smoothing.kernel_size))
                .done();
          })
      .on("equalize", assign(cfg.equalize))
      .on("binary_t", assign(cfg.binary_t))
      .on("adaptive",
          [&](const Json& j) {
            Fields(j, "config.adaptive")
                .on("block", assign(cfg.adaptive.block))
                .on("offset_d", assign(cfg.adaptive.offset_d))
                .on("weighting",
                    [&](const Json& w) { cfg.adaptive.weighting = enum_from(w, kWeightingNames); })
                .done();
          })
      .on("open_se", structuring_element(cfg.open_se, "config.open_se"))
      .on("open_iters", assign(cfg.open_iters))
      .on("close_se", structuring_element(cfg.close_se, "config.close_se"))
      .on("close_iters", assign(cfg.close_iters))
      .on("area_policy",
          [&](const Json& j) {
            Fields(j, "config.area_policy")
                .on("absolute_min", assign(cfg.area_policy.absolute_min))
                .on("relative_fraction", assign(cfg.area_policy.relative_fraction))
                .done();
          })
      .on("exclude_border_particles", assign(cfg.exclude_border_particles))
      .on("histogram_bin_width", assign(cfg.histogram_bin_width))
      .done();
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  return cfg;
}

Json rect_json(const Rect& r) {
  return {{"x", r.origin.x}, {"y", r.origin.y}, {"w", r.width}, {"h", r.height}};
}

}  // namespace

PipelineConfig config_from_json(const std::string& text, PipelineConfig base) {
  return config_from(parse(text, "config"), base);
}

std::string config_to_json(const PipelineConfig& cfg) { return config_json(cfg).dump(2) + "\n"; }

PipelineConfig load_config(const std::filesystem::path& path) {
  try {
    return config_from_json(read_text(path));
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

SceneSpec scene_from_json(const std::string& text, SceneSpec base) {
  const Json root = parse(text, "scene");
  SceneSpec s = base;
  Fields(root, "scene")
      .on("width", assign(s.width))
      .on("height", assign(s.height))
      .on("particle_count", assign(s.particle_count))
      .on("radius_range",
          [&](const Json& j) {
            if (!j.is_array() || j.size() != 2) throw SchemaError("expected [min, max]");
            s.radius_min = get_as<int>(j[0]);
            s.radius_max = get_as<int>(j[1]);
          })
      .on("gap", assign(s.gap))
      .on("exposure",
          [&](const Json& j) {
            try {
              s.exposure = exposure_from_string(get_as<std::string>(j));
            } catch (const std::invalid_argument& e) {
              throw SchemaError(e.what());
            }
          })
      .on("noise_sigma", assign(s.noise_sigma))
      .on("seed", assign(s.seed))
      .on("body_level", assign(s.body_level))
      .on("crack_level", assign(s.crack_level))
      .on("cross_boost", assign(s.cross_boost))
      .on("ramp_amplitude", assign(s.ramp_amplitude))
      .done();
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  return s;
}

std::string scene_to_json(const SceneSpec& s) {
  Json j;
  j["width"] = s.width;
  j["height"] = s.height;
  j["particle_count"] = s.particle_count;
  j["radius_range"] = {s.radius_min, s.radius_max};
  j["gap"] = s.gap;
  j["exposure"] = to_string(s.exposure);
  j["noise_sigma"] = s.noise_sigma;
  j["seed"] = s.seed;
  j["body_level"] = s.body_level;
  j["crack_level"] = s.crack_level;
  j["cross_boost"] = s.cross_boost;
  j["ramp_amplitude"] = s.ramp_amplitude;
  return j.dump(2) + "\n";
}

std::string report_to_json(const AnalysisReport& r) {
  Json j;
  j["method"] = to_string(r.method);
  j["width"] = r.width;
  j["height"] = r.height;
  j["count"] = r.count;
  j["area_stats"] = {{"min", r.area_stats.min},
                     {"max", r.area_stats.max},
                     {"mean", r.area_stats.mean},
                     {"median", r.area_stats.median}};
  j["diameter_histogram"] = {{"bin_width", r.diameter_histogram.bin_width},
                             {"counts", r.diameter_histogram.counts}};
  j["config_echo"] = config_json(r.config);
  Json particles = Json::array();
  for (std::size_t i = 0; i < r.particles.size(); ++i) {
    const ParticleRecord& p = r.particles[i];
    Json outline = Json::array();
    for (const Point& q : r.contours[i].points) outline.push_back({q.x, q.y});
    particles.push_back({{"id", p.id},
                         {"filled_area", p.filled_area},
                         {"equivalent_diameter", p.equivalent_diameter},
                         {"centroid", {{"x", p.centroid_x}, {"y", p.centroid_y}}},
                         {"bbox", rect_json(p.bbox)},
                         {"touches_border", p.touches_border},
                         {"outline", std::move(outline)}});
  }
  j["particles"] = std::move(particles);
  return j.dump(2) + "\n";
}

AnalysisReport report_from_json(const std::string& text) {
  const Json root = parse(text, "report");
  try {
    const int w = root.at("width").get<int>();
    const int h = root.at("height").get<int>();
    if (w < 1 || h < 1) throw SchemaError("report: width and height must be >= 1");
    PipelineConfig cfg = config_from(root.at("config_echo"), {});
    std::vector<Contour> contours;
    std::vector<bool> border;
    for (const Json& p : root.at("particles")) {
      border.push_back(p.at("touches_border").get<bool>());
      std::vector<Point> pts;
      for (const Json& q : p.at("outline")) {
        if (!q.is_array() || q.size() != 2) throw SchemaError("report: outline points are [x, y]");
        pts.push_back({q[0].get<int>(), q[1].get<int>()});
      }
      if (pts.empty()) throw SchemaError("report: empty outline");
      for (const Point& q : pts) {
        if (q.x < 0 || q.y < 0 || q.x >= w || q.y >= h) {
          throw SchemaError("report: outline point outside the canvas");
        }
      }
      contours.push_back(make_contour(std::move(pts)));
    }
    if (root.at("count").get<std::size_t>() != contours.size()) {
      throw SchemaError("report: count does not match the particle list");
    }
    const Method method = enum_from(root.at("method"), kMethodNames);
    // Exclusion already happened when the report was written.
    PipelineConfig keep_all = cfg;
    keep_all.exclude_border_particles = false;
    AnalysisReport r = make_report(method, std::move(contours), BinaryMask(w, h), keep_all, std::move(border));
    r.config = cfg;
    return r;
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("report: ") + e.what());
  }
}

std::string truth_to_json(const GroundTruth& gt) {
  Json j;
  j["width"] = gt.width;
  j["height"] = gt.height;
  Json particles = Json::array();
  for (const TrueParticle& p : gt.particles) {
    particles.push_back({{"id", p.id},
                         {"area", p.area},
                         {"centroid", {{"x", p.centroid_x}, {"y", p.centroid_y}}}});
  }
  j["particles"] = std::move(particles);
  // Row-major [label, run length] pairs.
  Json runs = Json::array();
  std::size_t k = 0;
  while (k < gt.labels.size()) {
    std::size_t e = k;
    while (e < gt.labels.size() && gt.labels[e] == gt.labels[k]) ++e;
    runs.push_back({gt.labels[k], e - k});
    k = e;
  }
  j["label_runs"] = std::move(runs);
  return j.dump() + "\n";
}

GroundTruth truth_from_json(const std::string& text) {
  const Json root = parse(text, "truth");
  try {
    const int w = root.at("width").get<int>();
    const int h = root.at("height").get<int>();
    if (w < 1 || h < 1 || static_cast<std::int64_t>(w) * h > (std::int64_t{1} << 30)) {
      throw SchemaError("truth: bad canvas size");
    }
    const std::size_t n = static_cast<std::size_t>(w) * h;
    const std::size_t count = root.at("particles").size();
    GroundTruth gt;
    gt.width = w;
    gt.height = h;
    gt.labels.reserve(n);
    for (const Json& run : root.at("label_runs")) {
      const auto label = run.at(0).get<std::int32_t>();
      const auto len = run.at(1).get<std::size_t>();
      if (label < 0 || static_cast<std::size_t>(label) > count || len > n - gt.labels.size()) {
        throw SchemaError("truth: label run out of range");
      }
      gt.labels.insert(gt.labels.end(), len, label);
    }
    if (gt.labels.size() != n) throw SchemaError("truth: label runs do not cover the canvas");
    // Areas are recomputed from the raster and must agree with the list.
    std::vector<std::int64_t> area(count + 1, 0);
    for (auto l : gt.labels) ++area[static_cast<std::size_t>(l)];
    for (const Json& p : root.at("particles")) {
      const int id = p.at("id").get<int>();
      if (id < 1 || static_cast<std::size_t>(id) > count) throw SchemaError("truth: bad particle id");
      if (area[static_cast<std::size_t>(id)] != p.at("area").get<std::int64_t>()) {
        throw SchemaError("truth: area of particle " + std::to_string(id) +
                          " disagrees with the label runs");
      }
    }
    gt.particles.resize(count);
    std::vector<double> sx(count + 1, 0.0), sy(count + 1, 0.0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const auto l = static_cast<std::size_t>(gt.label(x, y));
        sx[l] += x;
        sy[l] += y;
      }
    }
    for (std::size_t i = 1; i <= count; ++i) {
      if (area[i] == 0) throw SchemaError("truth: particle " + std::to_string(i) + " has no pixels");
      gt.particles[i - 1] = {static_cast<int>(i), area[i], sx[i] / static_cast<double>(area[i]),
                             sy[i] / static_cast<double>(area[i])};
    }
    return gt;
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("truth: ") + e.what());
  }
}

std::string metrics_to_json(const Metrics& m) {
  Json j;
  j["detected"] = m.detected;
  j["truth_count"] = m.truth_count;
  j["matched"] = m.matched;
  j["count_error"] = m.count_error;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["mean_iou"] = m.mean_iou;
  return j.dump(2) + "\n";
}

std::string particles_csv(const AnalysisReport& report) {
  std::string out = "id,area_px,eq_diameter_px,centroid_x,centroid_y,bbox_x,bbox_y,bbox_w,bbox_h\n";
  char line[256];
  for (const ParticleRecord& p : report.particles) {
    std::snprintf(line, sizeof line, "%d,%lld,%.6f,%.6f,%.6f,%d,%d,%d,%d\n", p.id,
                  static_cast<long long>(p.filled_area), p.equivalent_diameter, p.centroid_x,
                  p.centroid_y, p.bbox.origin.x, p.bbox.origin.y, p.bbox.width, p.bbox.height);
    out += line;
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return {bytes.begin(), bytes.end()};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace nanoseg::io
