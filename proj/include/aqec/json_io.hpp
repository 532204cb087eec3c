// json_io.hpp
// File formats. Channels: {"dim_in", "dim_out", "kraus": [...]} where each
// Kraus operator is a row-major nested array of [re, im] cells. Codes:
// {"d_a", "d_b", "d_h", "embedding"} with the same cell encoding. The
// channel parser recomputes sum_i E_i^dag E_i and rejects inputs where it
// is not a projector.

#pragma once

#include <json.hpp>

#include "aqec/recovery.hpp"

namespace aqec {

using Json = nlohmann::ordered_json;

Json mat_to_json(const Mat& m);
Mat mat_from_json(const Json& j, const char* what);

Json channel_to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const Json& j);

Json code_to_json(const SubsystemCode& code);
SubsystemCode code_from_json(const Json& j);

// Per-pair Frobenius norms, aggregate norms and pass/fail at tol.
Json residuals_to_json(const ResidualDecomposition& res, double tol);

Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace aqec
