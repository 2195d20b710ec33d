#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "alh/asymptotics.hpp"
#include "alh/flow.hpp"
#include "alh/geometry.hpp"
#include "alh/static_compare.hpp"

namespace alh {

using Json = nlohmann::ordered_json;

/// "%.17g"; NaN and infinities print as nan / inf / -inf.
std::string format_g17(double v);

/// Record {quantity, a0, a1, a2, error_estimate}.
Json to_json(std::string_view quantity, const ExpansionFit& fit);
Json to_json(const MassAspectResult& r);
Json to_json(const ComparisonReport& r);
Json to_json(const KottlerSpace& s);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

/// Writes the whole file or throws alh::Error.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace alh
