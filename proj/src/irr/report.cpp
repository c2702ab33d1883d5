#include "dre/irr/report.hpp"

#include "dre/irr/io.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace dre::irr {

RunLog read_snapshot_log(std::string_view jsonl, std::string source) {
  RunLog log;
  log.source = std::move(source);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= jsonl.size()) {
    std::size_t end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(log.source + ": malformed snapshot: " + e.what(), static_cast<int>(line_no), 1);
    }
    log.snapshots.push_back(snapshot_from_json(j));
  }
  log.complete = !log.snapshots.empty() && log.snapshots.back().event == Event::Done;
  return log;
}

std::vector<ReportRow> convergence_report(const std::vector<RunLog>& runs, bool allow_partial) {
  std::vector<std::vector<std::pair<std::size_t, double>>> curves;
  std::size_t last = 0;
  for (const auto& run : runs) {
    if (!run.complete && !allow_partial) throw IncompleteLog("incomplete run log: " + run.source);
    const Snapshot* end = nullptr;
    for (const auto& s : run.snapshots)
      if (s.event == Event::Accepted || s.event == Event::Done) end = &s;
    if (!end) throw IncompleteLog("run log without an accepted rectangle: " + run.source);
    curves.push_back(convergence(run.snapshots, end->region));
    last = std::max(last, end->step);
  }
  std::vector<ReportRow> rows;
  if (curves.empty()) return rows;
  for (std::size_t step = 0; step <= last; ++step) {
    std::vector<double> at;
    for (const auto& c : curves) {
      double v = 0;
      for (const auto& [s, pct] : c)
        if (s <= step) v = pct;
      at.push_back(v);
    }
    std::sort(at.begin(), at.end());
    std::size_t n = at.size();
    double median = n % 2 ? at[n / 2] : (at[n / 2 - 1] + at[n / 2]) / 2;
    rows.push_back({step, median, at.front(), at.back()});
  }
  return rows;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream o;
  o << "step,median,min,max\n" << std::fixed << std::setprecision(2);
  for (const auto& r : rows) o << r.step << "," << r.median << "," << r.min << "," << r.max << "\n";
  return o.str();
}

}  // namespace dre::irr
