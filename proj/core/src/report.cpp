#include "sturm_uniq/report.hpp"

#include "json.hpp"

#include "sturm_uniq/expr.hpp"

namespace sturm_uniq {

namespace {

using json = nlohmann::ordered_json;

void strip_volatile(json& node) {
  if (node.is_object()) {
    node.erase("wall_ms");
    for (auto& [key, value] : node.items()) strip_volatile(value);
  } else if (node.is_array()) {
    for (auto& value : node) strip_volatile(value);
  }
}

}  // namespace

std::string canonical_verdicts(const std::string& report_json) {
  json doc = json::parse(report_json, nullptr, false);
  if (doc.is_discarded()) {
    throw Error("canonical_verdicts: input is not valid JSON");
  }
  strip_volatile(doc);
  return doc.dump(2);
}

}  // namespace sturm_uniq
