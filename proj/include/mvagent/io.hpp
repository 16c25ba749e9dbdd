#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvagent/dataset.hpp"
#include "mvagent/metrics.hpp"

namespace mvagent {

// Line-oriented stage files: one JSON object per line, UTF-8, fields in a
// fixed order so identical inputs produce identical bytes.
using Json = nlohmann::ordered_json;

Json answer_to_json(const Answer& answer);
Answer answer_from_json(const nlohmann::json& j);

Json params_to_json(const TaskParams& params);
TaskParams params_from_json(const nlohmann::json& j);

// {id, task, instruction, image_ref?, params, ground_truth, variant_id}
Json record_to_json(const InstructionRecord& record);
// Throws DomainError on a malformed or inconsistent record.
InstructionRecord record_from_json(const nlohmann::json& j);

// {id, answer_text} or {id, error: {code, message}}
Json response_to_json(const ResponseEntry& response);
ResponseEntry response_from_json(const nlohmann::json& j);

Json report_to_json(const EvalReport& report);

// Throws DomainError naming the file and line on unreadable input.
std::vector<nlohmann::json> read_jsonl(const std::string& path);
void write_jsonl(const std::string& path, std::span<const Json> lines);

std::vector<InstructionRecord> read_dataset(const std::string& path);
void write_dataset(const std::string& path, std::span<const InstructionRecord> records);
std::vector<ResponseEntry> read_responses(const std::string& path);
void write_responses(const std::string& path, std::span<const ResponseEntry> responses);

}  // namespace mvagent
