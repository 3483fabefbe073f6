#ifndef RAUZY_REPORT_HPP
#define RAUZY_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "model.hpp"
#include "point_cloud.hpp"
#include "sadic.hpp"

namespace rauzy {

// Summary JSON plus the files written, in write order.
struct RunResult {
  nlohmann::json summary;
  std::vector<std::string> artifacts;
};

nlohmann::json info_json(const Model& model);

// "letter,x[,y]" with 12 significant digits; letters use alphabet symbols
// (1-based numerals when no alphabet is given).
void write_cloud_csv(const PointCloud& cloud, const std::string& path, const Alphabet* alphabet = nullptr);
PointCloud read_cloud_csv(const std::string& path);

// Each run reads its knobs from `options` (missing keys take defaults) and
// writes its artifacts into out_dir.
RunResult run_info(const Model& model, const std::string& out_dir);
RunResult run_cloud(const Model& model, const nlohmann::json& options, const std::string& out_dir);
RunResult run_gifs(const Model& model, const nlohmann::json& options, const std::string& out_dir);
RunResult run_measure(const Model& model, const nlohmann::json& options, const std::string& out_dir);
RunResult run_covering(const Model& model, const nlohmann::json& options, const std::string& out_dir);
RunResult run_sweep(const SubstitutionTemplate& tpl, const nlohmann::json& options, const std::string& out_dir);
RunResult run_sadic(const CompatibleFamily& family, const nlohmann::json& options, const std::string& out_dir);
RunResult run_render(const std::string& csv_path, const nlohmann::json& options, const std::string& svg_path);

}  // namespace rauzy

#endif
