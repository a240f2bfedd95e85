#pragma once

// CSV-backed objective table for externally evaluated datasets. Header row
// names the variables (by label column) followed by the objective columns;
// each data row holds the option labels of one design vector plus its
// objective values. Lookup is exact; nothing is interpolated.

#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "seqopt/design_space.hpp"
#include "seqopt/io.hpp"
#include "seqopt/objective.hpp"

namespace seqopt {

class TableBackend : public ObjectiveBackend {
public:
    /// Builds the table from parsed CSV rows. Columns are matched by name:
    /// every space variable must have a column; `objective_names` selects and
    /// orders the objective columns; extra columns are ignored.
    TableBackend(const DesignSpace& space, const std::vector<std::vector<std::string>>& rows,
                 std::vector<std::string> objective_names)
        : space_(&space), names_(std::move(objective_names)) {
        if (rows.empty()) throw std::runtime_error("objective table: empty CSV");
        if (names_.empty()) throw std::runtime_error("objective table: no objective columns declared");
        const std::vector<std::string>& header = rows.front();
        std::vector<std::size_t> var_col(space.variable_count());
        for (std::size_t i = 0; i < space.variable_count(); ++i)
            var_col[i] = find_column(header, space.variable(i).name);
        std::vector<std::size_t> obj_col;
        for (const std::string& n : names_) obj_col.push_back(find_column(header, n));

        for (std::size_t r = 1; r < rows.size(); ++r) {
            const auto& row = rows[r];
            if (row.size() != header.size())
                throw std::runtime_error("objective table: row " + std::to_string(r + 1) +
                                         " has " + std::to_string(row.size()) + " fields, expected " +
                                         std::to_string(header.size()));
            DesignVector v;
            v.idx.resize(space.variable_count());
            for (std::size_t i = 0; i < space.variable_count(); ++i) {
                const auto& opts = space.variable(i).options;
                const std::string& label = row[var_col[i]];
                auto it = std::find(opts.begin(), opts.end(), label);
                if (it == opts.end())
                    throw std::runtime_error("objective table: row " + std::to_string(r + 1) +
                                             ": unknown option '" + label + "' for variable '" +
                                             space.variable(i).name + "'");
                v[i] = static_cast<OptionIndex>(it - opts.begin());
            }
            ObjectiveVector obj;
            for (std::size_t c : obj_col) obj.push_back(parse_value(row[c], r));
            table_.emplace(std::move(v), std::move(obj));
        }
    }

    static TableBackend from_csv(const DesignSpace& space, const std::string& path,
                                 std::vector<std::string> objective_names) {
        return TableBackend(space, read_csv(path), std::move(objective_names));
    }

    std::size_t objective_count() const override { return names_.size(); }
    std::vector<std::string> objective_names() const override { return names_; }

    ObjectiveVector evaluate(const DesignVector& v) const override {
        auto it = table_.find(v);
        if (it == table_.end())
            throw BackendError("unevaluated design vector: " + describe(v), v);
        return it->second;
    }

    std::size_t row_count() const { return table_.size(); }

private:
    static std::size_t find_column(const std::vector<std::string>& header, const std::string& name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw std::runtime_error("objective table: missing column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    }

    static double parse_value(const std::string& s, std::size_t row) {
        try {
            std::size_t pos = 0;
            double x = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return x;
        } catch (const std::exception&) {
            throw std::runtime_error("objective table: row " + std::to_string(row + 1) +
                                     ": bad numeric value '" + s + "'");
        }
    }

    std::string describe(const DesignVector& v) const {
        std::ostringstream os;
        os << '(';
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) os << ", ";
            if (space_->contains(v))
                os << space_->variable(i).options[v[i]];
            else
                os << v[i];
        }
        os << ')';
        return os.str();
    }

    const DesignSpace* space_;
    std::vector<std::string> names_;
    std::unordered_map<DesignVector, ObjectiveVector, DesignVectorHash> table_;
};

} // namespace seqopt
