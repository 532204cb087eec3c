#include "aqec/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace aqec {

Json mat_to_json(const Mat& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat mat_from_json(const Json& j, const char* what) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument(std::string(what) + ": expected a non-empty array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) throw std::invalid_argument(std::string(what) + ": empty row");
    Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw std::invalid_argument(std::string(what) + ": ragged rows");
        for (std::size_t c = 0; c < cols; ++c) {
            const Json& cell = j[r][c];
            if (!cell.is_array() || cell.size() != 2)
                throw std::invalid_argument(std::string(what) + ": cell is not an [re, im] pair");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                Cplx(cell[0].get<double>(), cell[1].get<double>());
        }
    }
    return m;
}

Json channel_to_json(const KrausChannel& ch) {
    Json kraus = Json::array();
    for (const Mat& e : ch.kraus) kraus.push_back(mat_to_json(e));
    return Json{{"dim_in", ch.dim_in()}, {"dim_out", ch.dim_out()}, {"kraus", std::move(kraus)}};
}

KrausChannel channel_from_json(const Json& j) {
    if (!j.contains("dim_in") || !j.contains("dim_out") || !j.contains("kraus"))
        throw std::invalid_argument("channel: missing dim_in, dim_out or kraus");
    const int din = j["dim_in"].get<int>();
    const int dout = j["dim_out"].get<int>();
    std::vector<Mat> kraus;
    for (const Json& jk : j["kraus"]) {
        Mat e = mat_from_json(jk, "channel kraus");
        if (e.rows() != dout || e.cols() != din)
            throw std::invalid_argument("channel: Kraus operator is " + std::to_string(e.rows()) +
                                        "x" + std::to_string(e.cols()) + ", expected " +
                                        std::to_string(dout) + "x" + std::to_string(din));
        kraus.push_back(std::move(e));
    }
    if (kraus.empty()) throw std::invalid_argument("channel: empty Kraus list");
    Mat dom = Mat::Zero(din, din);
    for (const Mat& e : kraus) dom += e.adjoint() * e;
    const double proj_defect = (dom * dom - dom).norm();
    if (!is_hermitian(dom, 1e-9) || proj_defect > 1e-9)
        throw std::invalid_argument(
            "channel: sum_i E_i^dag E_i is not a projector (||D^2 - D||_F = " +
            std::to_string(proj_defect) + "); the map is not trace-preserving on any subspace");
    return make_channel(std::move(kraus), std::move(dom));
}

Json code_to_json(const SubsystemCode& code) {
    return Json{{"d_a", code.d_a},
                {"d_b", code.d_b},
                {"d_h", code.d_h},
                {"embedding", mat_to_json(code.embedding)}};
}

SubsystemCode code_from_json(const Json& j) {
    if (!j.contains("d_a") || !j.contains("d_b") || !j.contains("d_h") || !j.contains("embedding"))
        throw std::invalid_argument("code: missing d_a, d_b, d_h or embedding");
    return make_code(j["d_a"].get<int>(), j["d_b"].get<int>(), j["d_h"].get<int>(),
                     mat_from_json(j["embedding"], "code embedding"));
}

Json residuals_to_json(const ResidualDecomposition& res, double tol) {
    Json pairs = Json::array();
    for (int i = 0; i < res.n; ++i)
        for (int j = 0; j < res.n; ++j) {
            const double fro = res.delta(i, j).norm();
            pairs.push_back(Json{{"i", i}, {"j", j}, {"delta_fro", fro}, {"pass", fro <= tol}});
        }
    return Json{{"n", res.n},
                {"d_a", res.d_a},
                {"d_b", res.d_b},
                {"tol", tol},
                {"pairs", std::move(pairs)},
                {"sum_delta_norm", res.sum_delta_norm},
                {"max_delta_fro", res.max_delta_fro},
                {"pass", res.max_delta_fro <= tol}};
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    Json j;
    in >> j;
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << text;
}

}  // namespace aqec
