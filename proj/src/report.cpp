#include "dbc/report.hpp"

#include <cmath>

namespace dbc {

CheckReport make_check(std::string id, std::string statement, int n, double tol, std::string u, std::string v) {
    CheckReport r;
    r.id = std::move(id);
    r.statement = std::move(statement);
    r.n = n;
    r.tol = tol;
    r.u = std::move(u);
    r.v = std::move(v);
    return r;
}

nlohmann::json to_json(const CheckReport& r) {
    nlohmann::json j{{"check", r.id}, {"statement", r.statement}, {"n", r.n}, {"samples", r.samples},
                     {"tol", r.tol}, {"pass", r.pass()}};
    j["max_dev"] = r.invalid ? nlohmann::json(nullptr) : nlohmann::json(r.max_dev);
    j["u"] = r.u.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.u);
    j["v"] = r.v.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.v);
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

}  // namespace dbc
