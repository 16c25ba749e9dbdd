#include "mvagent/instruction_parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <vector>

namespace mvagent {
namespace {

struct Segment {
  bool placeholder;
  std::string_view text;  // literal text, or the placeholder letter
};

std::vector<Segment> split_template(std::string_view t) {
  std::vector<Segment> out;
  std::size_t p = 0;
  while (p < t.size()) {
    const std::size_t open = t.find('<', p);
    if (open == std::string_view::npos) {
      out.push_back({false, t.substr(p)});
      break;
    }
    if (open > p) out.push_back({false, t.substr(p, open - p)});
    out.push_back({true, t.substr(open + 1, 1)});
    p = open + 3;
  }
  return out;
}

bool literal_at(std::string_view text, std::size_t pos, std::string_view lit) {
  if (text.size() - pos < lit.size()) return false;
  for (std::size_t i = 0; i < lit.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[pos + i])) !=
        std::tolower(static_cast<unsigned char>(lit[i]))) {
      return false;
    }
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<int> read_count(std::string_view s) {
  if (s.empty() || s.size() > 2) return std::nullopt;
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v < 1 || v > kMaxAroundViews) return std::nullopt;
  return v;
}

std::optional<Rotation> read_rotation(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::fixed);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v) || v <= -360.0 || v >= 360.0) {
    return std::nullopt;
  }
  return Rotation(v);
}

// "left, rear", "left, front and rear", "left and right".
std::optional<std::vector<Viewpoint>> read_viewpoints(std::string_view s) {
  std::vector<Viewpoint> out;
  std::string normalized(s);
  for (std::size_t p = 0; (p = normalized.find(" and ", p)) != std::string::npos;) normalized.replace(p, 5, ",");
  std::string_view rest(normalized);
  while (true) {
    const std::size_t comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    const auto vp = parse_viewpoint(item);
    if (!vp) return std::nullopt;
    for (Viewpoint seen : out) {
      if (seen == *vp) return std::nullopt;
    }
    out.push_back(*vp);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (out.empty() || out.size() > 4) return std::nullopt;
  return out;
}

bool assign(char slot, std::string_view raw, TaskParams& params) {
  switch (slot) {
    case 'n':
      if (auto n = read_count(raw)) { params.n_views = n; return true; }
      return false;
    case 'd':
      if (auto d = read_rotation(raw)) { params.degree = d; return true; }
      return false;
    case 'v':
      if (auto v = read_viewpoints(raw)) { params.viewpoints = std::move(*v); return true; }
      return false;
    case 'c': {
      const std::string_view c = trim(raw);
      if (c.empty() || c.size() != raw.size() || c.find_first_of("\r\n") != std::string_view::npos) return false;
      params.caption = std::string(c);
      return true;
    }
    default:
      return false;
  }
}

bool match(std::string_view text, std::size_t pos, const std::vector<Segment>& segs, std::size_t i,
           TaskParams& params) {
  if (i == segs.size()) return pos == text.size();
  const Segment& seg = segs[i];
  if (!seg.placeholder) {
    return literal_at(text, pos, seg.text) && match(text, pos + seg.text.size(), segs, i + 1, params);
  }
  const bool last = i + 1 == segs.size();
  for (std::size_t end = pos + 1; end <= text.size(); ++end) {
    if (last ? end != text.size() : !literal_at(text, end, segs[i + 1].text)) continue;
    TaskParams trial = params;
    if (!assign(seg.text.front(), text.substr(pos, end - pos), trial)) continue;
    if (match(text, end, segs, i + 1, trial)) {
      params = std::move(trial);
      return true;
    }
  }
  return false;
}

}  // namespace

ParsedInstruction parse_instruction(std::string_view text) {
  const std::string_view body = trim(text);
  for (const TemplateVariant& v : template_bank()) {
    TaskParams params;
    if (match(body, 0, split_template(v.text), 0, params)) return {v.task, std::move(params), v.variant_id};
  }
  throw UnrecognizedTemplate(std::string(text));
}

}  // namespace mvagent
