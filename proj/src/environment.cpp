#include "fairaug/environment.hpp"

#include "fairaug/error.hpp"

namespace fairaug {

std::string_view to_string(LightingCat c) {
  return c == LightingCat::low ? "low" : "high";
}

std::string_view to_string(BackgroundCat c) {
  return c == BackgroundCat::simple ? "simple" : "complex";
}

LightingCat parse_lighting_cat(std::string_view s) {
  if (s == "low") return LightingCat::low;
  if (s == "high") return LightingCat::high;
  throw ParseError("unknown lighting category '" + std::string(s) + "'");
}

BackgroundCat parse_background_cat(std::string_view s) {
  if (s == "simple") return BackgroundCat::simple;
  if (s == "complex") return BackgroundCat::complex;
  throw ParseError("unknown background category '" + std::string(s) + "'");
}

std::string condition_name(std::size_t cond) {
  std::string s(to_string(condition_lighting(cond)));
  s += '/';
  s += to_string(condition_background(cond));
  return s;
}

std::size_t parse_condition(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) {
    throw ParseError("environment condition must look like 'low/simple', got '" +
                     std::string(s) + "'");
  }
  return condition_index(parse_lighting_cat(s.substr(0, slash)),
                         parse_background_cat(s.substr(slash + 1)));
}

}  // namespace fairaug
