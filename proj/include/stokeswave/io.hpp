#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "stokeswave/functionals.hpp"
#include "stokeswave/properties.hpp"
#include "stokeswave/trajectories.hpp"
#include "stokeswave/types.hpp"

namespace stokes {

namespace detail {

// Shortest decimal form that round-trips to the same double.
inline std::string fmt_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

// Write-then-rename so readers never observe a partial file.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec)
      throw std::runtime_error("cannot create directory " + path.parent_path().string() +
                               ": " + ec.message());
  }
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot move " + tmp.string() + " into place: " + ec.message());
}

// ---------------------------------------------------------------------------
// Wave files (JSON): exact round-trip of every double.
// ---------------------------------------------------------------------------

inline nlohmann::json wave_to_json(const StokesWave& w) {
  nlohmann::json j;
  j["lambda"] = w.lambda;
  j["wave_height"] = w.wave_height;
  j["gravity"] = w.gravity;
  j["c"] = w.c;
  j["B"] = w.B;
  j["k"] = w.k;
  j["coefficients"] = w.b;
  j["residual_norm"] = w.residual_norm;
  j["steepness"] = w.steepness;
  j["modes"] = w.modes();
  return j;
}

inline StokesWave wave_from_json(const nlohmann::json& j) {
  StokesWave w;
  try {
    w.lambda = j.at("lambda").get<double>();
    w.wave_height = j.at("wave_height").get<double>();
    w.gravity = j.at("gravity").get<double>();
    w.c = j.at("c").get<double>();
    w.B = j.at("B").get<double>();
    w.k = j.at("k").get<double>();
    w.b = j.at("coefficients").get<std::vector<double>>();
    w.residual_norm = j.at("residual_norm").get<double>();
    w.steepness = j.at("steepness").get<double>();
    const auto modes = j.at("modes").get<std::size_t>();
    if (modes != w.b.size())
      throw std::runtime_error("wave file: modes field disagrees with coefficient count");
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("wave file: ") + e.what());
  }
  if (!(w.lambda > 0.0) || !(w.gravity > 0.0) || !(w.c > 0.0) || !(w.k > 0.0))
    throw std::runtime_error("wave file: lambda, gravity, c and k must be positive");
  return w;
}

inline void save_wave(const StokesWave& w, const std::filesystem::path& path) {
  atomic_write(path, wave_to_json(w).dump(2) + "\n");
}

inline StokesWave load_wave(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open wave file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("wave file " + path.string() + ": " + e.what());
  }
  return wave_from_json(j);
}

// ---------------------------------------------------------------------------
// Curve and path CSV
// ---------------------------------------------------------------------------

inline std::string curve_to_csv(const FunctionalCurve& curve) {
  std::string out = "# kind=" + std::string(kind_name(curve.kind));
  if (kind_uses_s(curve.kind)) out += " s=" + detail::fmt_shortest(curve.s);
  out += " nodes=" + std::to_string(curve.quadrature_nodes);
  if (!curve.wave_id.empty()) out += " wave=" + curve.wave_id;
  out += "\np,value\n";
  for (std::size_t i = 0; i < curve.p_grid.size(); ++i)
    out += detail::fmt_shortest(curve.p_grid[i]) + "," +
           detail::fmt_shortest(curve.values[i]) + "\n";
  return out;
}

inline void write_curve_csv(const FunctionalCurve& curve, const std::filesystem::path& path) {
  atomic_write(path, curve_to_csv(curve));
}

inline std::string path_to_csv(const ParticlePath& path, const PeriodResult* summary = nullptr) {
  std::string out = "# frame=" + std::string(path.frame == Frame::lab ? "lab" : "moving") +
                    " p=" + detail::fmt_shortest(path.p) +
                    " x0=" + detail::fmt_shortest(path.x0) +
                    " y0=" + detail::fmt_shortest(path.y0) +
                    " t0=" + detail::fmt_shortest(path.t0) + "\nt,x,y\n";
  for (std::size_t i = 0; i < path.t.size(); ++i)
    out += detail::fmt_shortest(path.t[i]) + "," +
           detail::fmt_shortest(path.points[i].x) + "," +
           detail::fmt_shortest(path.points[i].y) + "\n";
  if (summary)
    out += "# T=" + detail::fmt_shortest(summary->T) +
           " drift=" + detail::fmt_shortest(summary->drift) +
           " closed=" + (summary->closed ? "true" : "false") + "\n";
  return out;
}

inline void write_path_csv(const ParticlePath& path, const std::filesystem::path& file,
                           const PeriodResult* summary = nullptr) {
  atomic_write(file, path_to_csv(path, summary));
}

// ---------------------------------------------------------------------------
// Verification reports
// ---------------------------------------------------------------------------

inline nlohmann::json report_to_json(const PropertyReport& rep) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : rep.checks) {
    nlohmann::json jc;
    jc["name"] = c.name;
    jc["theorem_ref"] = c.theorem_ref;
    jc["passed"] = c.passed;
    jc["skipped"] = c.skipped;
    jc["reason"] = c.reason;
    jc["worst_margin"] = c.worst_margin;
    jc["tolerance_used"] = c.tolerance_used;
    jc["location"] = c.location;
    checks.push_back(std::move(jc));
  }
  nlohmann::json j;
  j["wave_id"] = rep.wave_id;
  j["timestamp"] = rep.timestamp;
  j["passed"] = rep.passed_count();
  j["failed"] = rep.failed_count();
  j["skipped"] = rep.skipped_count();
  j["checks"] = std::move(checks);
  return j;
}

inline std::string report_to_text(const PropertyReport& rep) {
  std::size_t name_w = 4;
  for (const auto& c : rep.checks) name_w = std::max(name_w, c.name.size());
  std::string out = "wave: " + rep.wave_id + "\ntime: " + rep.timestamp + "\n\n";
  for (const auto& c : rep.checks) {
    const char* status = c.skipped ? "SKIP" : (c.passed ? "PASS" : "FAIL");
    char margin[64];
    std::snprintf(margin, sizeof margin, "% .3e", c.worst_margin);
    out += std::string(status) + "  " + c.name +
           std::string(name_w - c.name.size() + 2, ' ') +
           "margin=" + (c.skipped ? "     --      " : margin) +
           "  tol=" + detail::fmt_g(c.tolerance_used);
    if (!c.location.empty()) out += "  at " + c.location;
    out += "\n";
    if (!c.reason.empty()) out += "      " + c.reason + "\n";
  }
  out += "\n" + std::to_string(rep.passed_count()) + " passed, " +
         std::to_string(rep.failed_count()) + " failed, " +
         std::to_string(rep.skipped_count()) + " skipped\n";
  return out;
}

inline void write_report(const PropertyReport& rep, const std::filesystem::path& json_path,
                         const std::filesystem::path& text_path) {
  atomic_write(json_path, report_to_json(rep).dump(2) + "\n");
  atomic_write(text_path, report_to_text(rep));
}

}  // namespace stokes
