#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cmpkit::svg {

/// Minimal deterministic scatter/curve plot writer. Fixed-precision number
/// formatting keeps output byte-identical for identical inputs.
class Plot {
public:
    Plot(std::string title, std::string x_label, std::string y_label);

    void add_scatter(const std::vector<std::pair<double, double>>& pts,
                     const std::string& color, const std::string& name);
    void add_curve(const std::vector<std::pair<double, double>>& pts,
                   const std::string& color, const std::string& name);

    std::string render() const;
    void write(const std::string& path) const;

private:
    struct Series {
        std::vector<std::pair<double, double>> pts;
        std::string color;
        std::string name;
        bool line;
    };
    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
};

} // namespace cmpkit::svg
