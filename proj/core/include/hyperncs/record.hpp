#pragma once

#include <string>
#include <vector>

#include "hyperncs/ncs.hpp"

namespace hyperncs::record {

/// JSON-lines record stream. Line 1 is a header carrying the effective
/// configuration and the initialisation summary; each following line is one
/// GenerationRecord. All values are deterministic for a fixed config and
/// seed; wall-clock timings are kept out of this stream on purpose.

std::string header_line(const std::string& config_json,
                        const std::vector<double>& init_fitnesses,
                        long init_evals);

std::string generation_line(const search::GenerationRecord& record);

struct RecordStream {
  std::string config_json;  // re-serialised header config
  std::vector<double> init_fitnesses;
  long init_evals = 0;
  std::vector<search::GenerationRecord> generations;
};

RecordStream parse_stream(const std::string& jsonl_text);
RecordStream read_stream(const std::string& path);

}  // namespace hyperncs::record
