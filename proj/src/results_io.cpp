#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "aircomp/error.hpp"
#include "aircomp/harness.hpp"
#include "json.hpp"

namespace aircomp {

namespace {

using nlohmann::json;

std::string fmt_g(double v, int digits) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << body;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

std::string format_csv(const std::vector<SweepResult>& results) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : results) {
    out += r.sweep_name + "," + fmt_g(r.sweep_value, 9) + "," + r.scheme + "," +
           fmt_g(r.mean_mse, 9) + "," + fmt_g(r.median_mse, 9) + "," +
           fmt_g(r.std_mse, 9) + "," + fmt_g(r.mean_mse_per_k, 9) + "," +
           std::to_string(r.trials) + "," + fmt_g(r.mean_outer_iters, 9) + "\n";
  }
  return out;
}

std::string format_json(const std::vector<SweepResult>& results) {
  json arr = json::array();
  for (const auto& r : results) {
    json obj = {{"sweep_name", r.sweep_name},
                {"sweep_value", r.sweep_value},
                {"scheme", r.scheme},
                {"mean_mse", number_or_null(r.mean_mse)},
                {"median_mse", number_or_null(r.median_mse)},
                {"std_mse", number_or_null(r.std_mse)},
                {"mean_mse_per_k", number_or_null(r.mean_mse_per_k)},
                {"trials", r.trials},
                {"mean_outer_iters", number_or_null(r.mean_outer_iters)}};
    if (r.error) obj["error"] = *r.error;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::vector<SweepResult> parse_results_json(const std::string& text) {
  std::vector<SweepResult> out;
  try {
    for (const auto& obj : json::parse(text)) {
      SweepResult r;
      r.sweep_name = obj.at("sweep_name").get<std::string>();
      r.sweep_value = obj.at("sweep_value").get<double>();
      r.scheme = obj.at("scheme").get<std::string>();
      r.mean_mse = number_from(obj.at("mean_mse"));
      r.median_mse = number_from(obj.at("median_mse"));
      r.std_mse = number_from(obj.at("std_mse"));
      r.mean_mse_per_k = number_from(obj.at("mean_mse_per_k"));
      r.trials = obj.at("trials").get<int>();
      r.mean_outer_iters = number_from(obj.at("mean_outer_iters"));
      if (obj.contains("error")) r.error = obj.at("error").get<std::string>();
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("results json: ") + e.what());
  }
  return out;
}

void write_results(const std::vector<SweepResult>& results,
                   const std::filesystem::path& out_path, OutputFormat format) {
  if (results.empty()) throw InvalidInputError("write_results: no results");
  write_file(out_path,
             format == OutputFormat::kCsv ? format_csv(results) : format_json(results));
}

void write_trial_dump(const std::vector<TrialRecord>& trials,
                      const std::filesystem::path& out_path) {
  std::ostringstream out;
  out << "sweep_name,sweep_value,scheme,trial,mse,outer_iters,converged,positions\n";
  for (const auto& t : trials) {
    out << t.sweep_name << ',' << fmt_g(t.sweep_value, 9) << ',' << t.scheme
        << ',' << t.trial << ',' << fmt_g(t.mse, 17) << ',' << t.outer_iters
        << ',' << (t.converged ? 1 : 0) << ',';
    // x:y pairs separated by spaces
    for (std::size_t i = 0; i < t.positions.size(); ++i) {
      if (i > 0) out << ' ';
      out << fmt_g(t.positions[i].x, 17) << ':' << fmt_g(t.positions[i].y, 17);
    }
    out << '\n';
  }
  write_file(out_path, out.str());
}

}  // namespace aircomp
