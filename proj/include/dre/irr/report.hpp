#pragma once

#include "dre/core/error.hpp"
#include "dre/irr/irr.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace dre::irr {

/// A snapshot log that ends before the run's done event.
class IncompleteLog : public Error {
 public:
  using Error::Error;
};

struct RunLog {
  std::string source;
  std::vector<Snapshot> snapshots;
  bool complete = false;  // ends with a done event
};

/// One snapshot JSON object per line; blank lines ignored.
RunLog read_snapshot_log(std::string_view jsonl, std::string source = "");

struct ReportRow {
  std::size_t step = 0;
  double median = 0;
  double min = 0;
  double max = 0;
};

/// Per step, the convergence percentage of every run (its last accepted
/// rectangle at or before that step, measured against the run's own final
/// rectangle), summarized as median, worst and best. Partial runs are measured
/// against their last accepted rectangle and only with `allow_partial`.
std::vector<ReportRow> convergence_report(const std::vector<RunLog>& runs, bool allow_partial);

/// step,median,min,max
std::string report_csv(const std::vector<ReportRow>& rows);

}  // namespace dre::irr
