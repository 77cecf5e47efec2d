#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>

namespace fairaug {

enum class LightingCat { low, high };
enum class BackgroundCat { simple, complex };

// Mean HSV value below this (0-255 scale) is "low light".
inline constexpr double kLowLightThreshold = 85.0;
// Edge density above this is "complex background".
inline constexpr double kComplexBackgroundThreshold = 0.1;

struct EnvAttributes {
  double lighting_score = 0.0;  // [0, 255]
  double bg_complexity = 0.0;   // [0, 1]
  LightingCat lighting_cat = LightingCat::high;
  BackgroundCat bg_cat = BackgroundCat::simple;

  friend bool operator==(const EnvAttributes&, const EnvAttributes&) = default;
};

// Both comparisons are strict: 85.0 is high light, 0.1 is simple.
constexpr std::pair<LightingCat, BackgroundCat> categorize(double lighting_score,
                                                           double bg_complexity) {
  return {lighting_score < kLowLightThreshold ? LightingCat::low : LightingCat::high,
          bg_complexity > kComplexBackgroundThreshold ? BackgroundCat::complex
                                                      : BackgroundCat::simple};
}

inline EnvAttributes make_env(double lighting_score, double bg_complexity) {
  auto [l, b] = categorize(lighting_score, bg_complexity);
  return {lighting_score, bg_complexity, l, b};
}

// The four joint (lighting, background) conditions, indexed
// lighting * 2 + background: low/simple, low/complex, high/simple, high/complex.
inline constexpr std::size_t kEnvConditions = 4;

constexpr std::size_t condition_index(LightingCat l, BackgroundCat b) {
  return static_cast<std::size_t>(l) * 2 + static_cast<std::size_t>(b);
}
constexpr std::size_t condition_index(const EnvAttributes& e) {
  return condition_index(e.lighting_cat, e.bg_cat);
}
constexpr LightingCat condition_lighting(std::size_t cond) {
  return static_cast<LightingCat>(cond / 2);
}
constexpr BackgroundCat condition_background(std::size_t cond) {
  return static_cast<BackgroundCat>(cond % 2);
}

std::string_view to_string(LightingCat c);
std::string_view to_string(BackgroundCat c);
LightingCat parse_lighting_cat(std::string_view s);
BackgroundCat parse_background_cat(std::string_view s);

// "low/simple" style label for a joint condition.
std::string condition_name(std::size_t cond);
std::size_t parse_condition(std::string_view s);

}  // namespace fairaug
