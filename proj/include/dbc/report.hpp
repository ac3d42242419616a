#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace dbc {

// One verified property: the worst deviation seen over `samples` and the
// tolerance it is judged against.  A NaN deviation always fails.
struct CheckReport {
    std::string id;
    std::string statement;
    int n = 0;
    std::string u, v;
    int samples = 0;
    double max_dev = 0.0;
    double tol = 0.0;
    bool invalid = false;
    std::string note;

    void add(double dev) {
        ++samples;
        if (!(dev == dev)) invalid = true;
        else if (dev > max_dev) max_dev = dev;
    }
    void merge(const CheckReport& o) {
        samples += o.samples;
        invalid = invalid || o.invalid;
        if (o.max_dev > max_dev) max_dev = o.max_dev;
    }
    bool pass() const { return !invalid && samples > 0 && max_dev <= tol; }
};

CheckReport make_check(std::string id, std::string statement, int n, double tol, std::string u = {}, std::string v = {});

nlohmann::json to_json(const CheckReport& r);

}  // namespace dbc
