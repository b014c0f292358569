#pragma once

#include <string>
#include <vector>

namespace dissect {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  double seconds = 0;
  std::vector<std::string> details;
};

// Replays the reproduction targets against the tables in data_dir
// (paper_tables.json, p3.json, p4.json).
std::vector<CriterionResult> run_acceptance(const std::string& data_dir, const std::vector<int>& only = {});

std::string format_result(const CriterionResult& r, bool timing = true);

}  // namespace dissect
