#include "seld/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "seld/accddoa.hpp"
#include "seld/angles.hpp"
#include "seld/assignment.hpp"
#include "seld/error.hpp"
#include "text_util.hpp"

namespace seld {

void MatchingConfig::validate() const {
  if (!(angle_threshold > 0.0)) throw Error("metrics.angle must be > 0");
  if (!(rel_dist_threshold > 0.0)) throw Error("metrics.rel_dist must be > 0");
}

FrameMatch match_frame(const EventList& preds, const EventList& refs, int class_id) {
  std::vector<int> p, r;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].class_id == class_id) p.push_back(static_cast<int>(i));
  }
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (refs[i].class_id == class_id) r.push_back(static_cast<int>(i));
  }
  const int rows = static_cast<int>(p.size()), cols = static_cast<int>(r.size());
  std::vector<double> cost(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i) {
    const Event& a = preds[static_cast<std::size_t>(p[i])];
    for (int j = 0; j < cols; ++j) {
      const Event& b = refs[static_cast<std::size_t>(r[j])];
      cost[static_cast<std::size_t>(i) * cols + j] =
          angular_distance(Direction{a.azimuth, a.elevation}, Direction{b.azimuth, b.elevation});
    }
  }
  const std::vector<int> assigned = solve_assignment(cost, rows, cols);

  FrameMatch match;
  std::vector<bool> ref_used(static_cast<std::size_t>(cols), false);
  for (int i = 0; i < rows; ++i) {
    const int j = assigned[static_cast<std::size_t>(i)];
    if (j < 0) {
      match.unmatched_preds.push_back(p[i]);
      continue;
    }
    ref_used[static_cast<std::size_t>(j)] = true;
    match.pairs.push_back({p[i], r[j], cost[static_cast<std::size_t>(i) * cols + j]});
  }
  for (int j = 0; j < cols; ++j) {
    if (!ref_used[static_cast<std::size_t>(j)]) match.unmatched_refs.push_back(r[j]);
  }
  return match;
}

double ClassStats::f1() const {
  const long denom = 2 * tp + fp + fn;
  return denom == 0 ? 1.0 : 2.0 * tp / static_cast<double>(denom);
}

long EvalReport::total_tp() const {
  long s = 0;
  for (const auto& c : per_class) s += c.tp;
  return s;
}
long EvalReport::total_fp() const {
  long s = 0;
  for (const auto& c : per_class) s += c.fp;
  return s;
}
long EvalReport::total_fn() const {
  long s = 0;
  for (const auto& c : per_class) s += c.fn;
  return s;
}

EvalReport evaluate(const std::vector<EventList>& preds, const std::vector<EventList>& refs,
                    const MatchingConfig& config) {
  config.validate();
  if (preds.size() != refs.size()) {
    throw Error("frame count mismatch: " + std::to_string(preds.size()) + " prediction frames, " +
                std::to_string(refs.size()) + " reference frames");
  }
  EvalReport report;
  for (int c = 0; c < kNumClasses; ++c) report.per_class[static_cast<std::size_t>(c)].class_id = c;

  for (std::size_t f = 0; f < refs.size(); ++f) {
    for (const Event& e : refs[f]) {
      if (e.class_id < 0 || e.class_id >= kNumClasses) {
        throw Error("frame " + std::to_string(f) + ": reference class_id out of range");
      }
      if (!(e.distance > 0.0)) {
        throw Error("frame " + std::to_string(f) + ", class " + std::to_string(e.class_id) +
                    ": reference distance must be > 0");
      }
    }
    for (int c = 0; c < kNumClasses; ++c) {
      ClassStats& s = report.per_class[static_cast<std::size_t>(c)];
      const FrameMatch m = match_frame(preds[f], refs[f], c);
      s.refs += static_cast<long>(m.pairs.size() + m.unmatched_refs.size());
      s.fp += static_cast<long>(m.unmatched_preds.size());
      s.fn += static_cast<long>(m.unmatched_refs.size());
      for (const MatchedPair& pair : m.pairs) {
        const double dp = preds[f][static_cast<std::size_t>(pair.pred)].distance;
        const double dr = refs[f][static_cast<std::size_t>(pair.ref)].distance;
        const double rel = std::abs(dp - dr) / dr;
        ++s.pairs;
        s.angle_sum += pair.angle;
        s.rel_dist_sum += rel;
        if (pair.angle <= config.angle_threshold && rel <= config.rel_dist_threshold) {
          ++s.tp;
        } else {
          ++s.fp;
          ++s.fn;
        }
      }
    }
  }

  double f1_sum = 0.0, doae_sum = 0.0, rde_sum = 0.0;
  int f1_n = 0, loc_n = 0;
  for (const ClassStats& s : report.per_class) {
    if (s.has_refs()) {
      f1_sum += s.f1();
      ++f1_n;
    }
    if (s.has_pairs()) {
      doae_sum += s.doae();
      rde_sum += s.rde();
      ++loc_n;
    }
  }
  report.f1 = f1_n > 0 ? f1_sum / f1_n : (report.total_fp() == 0 ? 1.0 : 0.0);
  report.doae = loc_n > 0 ? doae_sum / loc_n : kUndefinedDoae;
  report.rde = loc_n > 0 ? rde_sum / loc_n : kUndefinedRde;
  return report;
}

std::string format_table(const EvalReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-20s %6s %6s %6s %8s %8s %8s\n", "class", "TP", "FP", "FN", "F1", "DOAE",
                "RDE");
  out << line;
  for (const ClassStats& s : report.per_class) {
    if (s.refs == 0 && s.fp == 0) continue;
    char doae[32] = "-", rde[32] = "-";
    if (s.has_pairs()) {
      std::snprintf(doae, sizeof doae, "%.1f", s.doae());
      std::snprintf(rde, sizeof rde, "%.1f%%", 100.0 * s.rde());
    }
    std::snprintf(line, sizeof line, "%-20s %6ld %6ld %6ld %7.1f%% %8s %8s\n",
                  class_names()[static_cast<std::size_t>(s.class_id)].c_str(), s.tp, s.fp, s.fn, 100.0 * s.f1(),
                  doae, rde);
    out << line;
  }
  std::snprintf(line, sizeof line, "\nF1 %.1f%%  DOAE %.1f\u00b0  RDE %.1f%%\n", 100.0 * report.f1, report.doae,
                100.0 * report.rde);
  out << line;
  return out.str();
}

std::string format_key_values(const EvalReport& report) {
  std::ostringstream out;
  out << "f1=" << detail::format_double(report.f1) << '\n';
  out << "doae=" << detail::format_double(report.doae) << '\n';
  out << "rde=" << detail::format_double(report.rde) << '\n';
  out << "tp=" << report.total_tp() << '\n';
  out << "fp=" << report.total_fp() << '\n';
  out << "fn=" << report.total_fn() << '\n';
  for (const ClassStats& s : report.per_class) {
    const std::string k = "class" + std::to_string(s.class_id) + ".";
    out << k << "tp=" << s.tp << '\n' << k << "fp=" << s.fp << '\n' << k << "fn=" << s.fn << '\n';
    out << k << "f1=" << detail::format_double(s.f1()) << '\n';
    if (s.has_pairs()) {
      out << k << "doae=" << detail::format_double(s.doae()) << '\n';
      out << k << "rde=" << detail::format_double(s.rde()) << '\n';
    }
  }
  return out.str();
}

}  // namespace seld
