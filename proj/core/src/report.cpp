#include "mcd/report.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace mcd {

namespace {

using Json = nlohmann::ordered_json;

const char* rule_name(MembershipRule r) {
  return r == MembershipRule::kDerived ? "derived" : "literal";
}

MembershipRule rule_from(const std::string& s) {
  if (s == "derived") return MembershipRule::kDerived;
  if (s == "literal") return MembershipRule::kLiteral;
  throw StructureError("unknown membership_rule '" + s + "'");
}

void reject_unknown(const Json& obj, std::initializer_list<const char*> keys,
                    const std::string& where) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.contains(k)) throw StructureError("unknown key '" + k + "' in " + where);
  }
}

template <typename T>
void read_opt(const Json& obj, const char* key, T& into) {
  if (auto it = obj.find(key); it != obj.end()) into = it->get<T>();
}

Json config_json(const PipelineConfig& c) {
  return Json{
      {"levels", c.levels},
      {"gain", c.gain},
      {"roi_levels", c.roi_levels},
      {"roi",
       {{"skew_threshold", c.roi.skew_threshold},
        {"kurt_threshold", c.roi.kurt_threshold},
        {"window", c.roi.window},
        {"stride", c.roi.stride}}},
      {"edge_k", c.edges.k},
      {"fcs",
       {{"m", c.fcs.m},
        {"w", c.fcs.w},
        {"epsilon", c.fcs.epsilon},
        {"max_iter", c.fcs.max_iter},
        {"restarts", c.fcs.restarts},
        {"membership_rule", rule_name(c.fcs.membership_rule)}}},
      {"validity",
       {{"cd_threshold", c.validity.cd_threshold},
        {"rst_threshold", c.validity.rst_threshold},
        {"min_radius_mm", c.validity.min_radius_mm},
        {"max_radius_mm", c.validity.max_radius_mm},
        {"characteristic_cutoff", c.validity.characteristic_cutoff}}},
      {"pixel_pitch_mm", c.pixel_pitch_mm},
  };
}

PipelineConfig config_from(const Json& j) {
  PipelineConfig c;
  reject_unknown(j,
                 {"levels", "gain", "roi_levels", "roi", "edge_k", "fcs", "validity",
                  "pixel_pitch_mm"},
                 "config");
  read_opt(j, "levels", c.levels);
  read_opt(j, "gain", c.gain);
  read_opt(j, "roi_levels", c.roi_levels);
  read_opt(j, "edge_k", c.edges.k);
  read_opt(j, "pixel_pitch_mm", c.pixel_pitch_mm);
  if (auto it = j.find("roi"); it != j.end()) {
    reject_unknown(*it, {"skew_threshold", "kurt_threshold", "window", "stride"}, "roi");
    read_opt(*it, "skew_threshold", c.roi.skew_threshold);
    read_opt(*it, "kurt_threshold", c.roi.kurt_threshold);
    read_opt(*it, "window", c.roi.window);
    read_opt(*it, "stride", c.roi.stride);
  }
  if (auto it = j.find("fcs"); it != j.end()) {
    reject_unknown(*it, {"m", "w", "epsilon", "max_iter", "restarts", "membership_rule"},
                   "fcs");
    read_opt(*it, "m", c.fcs.m);
    read_opt(*it, "w", c.fcs.w);
    read_opt(*it, "epsilon", c.fcs.epsilon);
    read_opt(*it, "max_iter", c.fcs.max_iter);
    read_opt(*it, "restarts", c.fcs.restarts);
    if (auto r = it->find("membership_rule"); r != it->end()) {
      c.fcs.membership_rule = rule_from(r->get<std::string>());
    }
  }
  if (auto it = j.find("validity"); it != j.end()) {
    reject_unknown(*it,
                   {"cd_threshold", "rst_threshold", "min_radius_mm", "max_radius_mm",
                    "characteristic_cutoff"},
                   "validity");
    read_opt(*it, "cd_threshold", c.validity.cd_threshold);
    read_opt(*it, "rst_threshold", c.validity.rst_threshold);
    read_opt(*it, "min_radius_mm", c.validity.min_radius_mm);
    read_opt(*it, "max_radius_mm", c.validity.max_radius_mm);
    read_opt(*it, "characteristic_cutoff", c.validity.characteristic_cutoff);
  }
  c.validate();
  return c;
}

Json parse(std::string_view text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what(), e.byte);
  }
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

std::string report_to_json(const DetectionReport& r) {
  Json dets = Json::array();
  for (const auto& d : r.detections) {
    dets.push_back({{"group_id", d.group_id},
                    {"x", d.center.x},
                    {"y", d.center.y},
                    {"radius", d.radius},
                    {"cluster_density", d.cluster_density},
                    {"shell_thickness", d.shell_thickness},
                    {"accepted", d.accepted},
                    {"iterations", d.iterations},
                    {"converged", d.converged}});
  }
  const auto& n = r.counts;
  Json doc{
      {"source", r.source},
      {"width", r.width},
      {"height", r.height},
      {"config", config_json(r.config)},
      {"counts",
       {{"roi_windows_total", n.roi_windows_total},
        {"roi_windows_fired", n.roi_windows_fired},
        {"edge_pixels", n.edge_pixels},
        {"edge_groups", n.edge_groups},
        {"roi_groups", n.roi_groups},
        {"fits_attempted", n.fits_attempted},
        {"fits_rejected_geometry", n.fits_rejected_geometry},
        {"accepted", n.accepted}}},
      {"detections", std::move(dets)},
  };
  return doc.dump(2) + "\n";
}

DetectionReport report_from_json(std::string_view text) {
  const Json doc = parse(text, "report");
  DetectionReport r;
  try {
    r.source = doc.at("source").get<std::string>();
    r.width = doc.at("width").get<std::size_t>();
    r.height = doc.at("height").get<std::size_t>();
    r.config = config_from(doc.at("config"));
    const auto& n = doc.at("counts");
    r.counts.roi_windows_total = n.at("roi_windows_total").get<std::size_t>();
    r.counts.roi_windows_fired = n.at("roi_windows_fired").get<std::size_t>();
    r.counts.edge_pixels = n.at("edge_pixels").get<std::size_t>();
    r.counts.edge_groups = n.at("edge_groups").get<std::size_t>();
    r.counts.roi_groups = n.at("roi_groups").get<std::size_t>();
    r.counts.fits_attempted = n.at("fits_attempted").get<std::size_t>();
    r.counts.fits_rejected_geometry = n.at("fits_rejected_geometry").get<std::size_t>();
    r.counts.accepted = n.at("accepted").get<std::size_t>();
    for (const auto& d : doc.at("detections")) {
      Detection det;
      det.group_id = d.at("group_id").get<int>();
      det.center = {d.at("x").get<double>(), d.at("y").get<double>()};
      det.radius = d.at("radius").get<double>();
      det.cluster_density = d.at("cluster_density").get<double>();
      det.shell_thickness = d.at("shell_thickness").get<double>();
      det.accepted = d.at("accepted").get<bool>();
      det.iterations = d.at("iterations").get<int>();
      det.converged = d.at("converged").get<bool>();
      r.detections.push_back(det);
    }
  } catch (const Json::exception& e) {
    throw StructureError(std::string("report: ") + e.what());
  }
  return r;
}

void write_report(const DetectionReport& report, const std::filesystem::path& path) {
  spit(report_to_json(report), path);
}

DetectionReport read_report(const std::filesystem::path& path) {
  return report_from_json(slurp(path));
}

std::string config_to_json(const PipelineConfig& config) {
  return config_json(config).dump(2) + "\n";
}

PipelineConfig config_from_json(std::string_view text) {
  const Json doc = parse(text, "config");
  try {
    return config_from(doc);
  } catch (const Json::exception& e) {
    throw StructureError(std::string("config: ") + e.what());
  }
}

PipelineConfig load_config(const std::filesystem::path& path) {
  return config_from_json(slurp(path));
}

}  // namespace mcd
