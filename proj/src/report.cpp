#include "rfloer/report.hpp"

namespace rfloer {

nlohmann::json int_to_json(const Int& x) {
    if (x.fits_slong_p()) return x.get_si();
    return x.get_str();
}

nlohmann::json matrix_to_json(const IntMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json r = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(int_to_json(m(i, j)));
        rows.push_back(r);
    }
    return rows;
}

nlohmann::json presentation_to_json(const ZModulePresentation& p) {
    if (p.is_zero()) return "0";
    nlohmann::json t = nlohmann::json::array();
    for (const auto& f : p.torsion) t.push_back(int_to_json(f));
    return {{"free", p.free_rank}, {"torsion", t}};
}

}  // namespace rfloer
