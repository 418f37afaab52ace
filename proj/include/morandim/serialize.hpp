#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "morandim/bounds.hpp"
#include "morandim/cover.hpp"
#include "morandim/dini.hpp"
#include "morandim/estimator.hpp"
#include "morandim/moran.hpp"
#include "morandim/sequence.hpp"

namespace morandim {

// Shortest decimal that round-trips to the same double; used everywhere so a
// given input produces byte-identical output files.
std::string format_double(double v);

nlohmann::json class_report_json(const ClassReport& report);
nlohmann::json sequence_json(const RatioSequence& seq);
nlohmann::json synthesis_json(const SynthesisResult& result);
nlohmann::json stream_summary_json(const StreamSummary& summary);
nlohmann::json cost_report_json(const CostReport& report, const CoverSpec& spec,
                                double optimal_exponent);
nlohmann::json profile_json(const DimensionProfile& profile);
std::string profile_csv(const DimensionProfile& profile);
nlohmann::json cubes_json(const std::vector<Cube>& cubes);
std::string cubes_csv(const std::vector<Cube>& cubes);
nlohmann::json envelope_json(const std::vector<EnvelopeStep>& rows);
std::string envelope_csv(const std::vector<EnvelopeStep>& rows);

// Binary write, UTF-8 content with LF endings as produced by the writers.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace morandim
