#include "ineqreg/datasets.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ineqreg/errors.hpp"

namespace ineqreg {

namespace {

std::string trimmed(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

Index column_index(const std::vector<std::string>& header, const std::string& name,
                   const std::string& path) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw ParseError(path + ": missing required column '" + name + "'");
    return Index(it - header.begin());
}

}  // namespace

Matrix load_csv(const std::string& path, std::vector<std::string>* header_out) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dataset: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");

    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(trimmed(cell));
    }
    if (header.empty()) throw ParseError(path + ": empty header row");

    std::vector<std::vector<double>> rows;
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (trimmed(line).empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        std::size_t col = 0;
        while (std::getline(ss, cell, ',')) {
            ++col;
            cell = trimmed(cell);
            if (cell.empty())
                throw MissingValue(path + ": missing value at row " + std::to_string(row_no) +
                                   ", column " + std::to_string(col));
            try {
                std::size_t pos = 0;
                row.push_back(std::stod(cell, &pos));
                if (pos != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw ParseError(path + ": row " + std::to_string(row_no) + ", column " +
                                 std::to_string(col) + ": not a number: '" + cell + "'");
            }
        }
        if (row.size() != header.size())
            throw ParseError(path + ": row " + std::to_string(row_no) + " has " +
                             std::to_string(row.size()) + " fields, expected " +
                             std::to_string(header.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path + ": no data rows");

    Matrix m(Index(rows.size()), Index(header.size()));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[size_t(i)][size_t(j)];
    if (header_out) *header_out = std::move(header);
    return m;
}

Dataset load_dataset(const std::string& path, DatasetFormat format) {
    std::vector<std::string> header;
    Matrix raw = load_csv(path, &header);
    const Index n = raw.rows();
    Dataset ds;

    if (format == DatasetFormat::rent) {
        Vector rent = raw.col(column_index(header, "rent", path));
        Vector rooms = raw.col(column_index(header, "rooms", path));
        Vector dist = raw.col(column_index(header, "distance", path));
        Vector sex = raw.col(column_index(header, "sex", path));
        for (Index i = 0; i < n; ++i)
            if (sex[i] != 0.0 && sex[i] != 1.0)
                throw ParseError(path + ": sex must be 0/1 at row " + std::to_string(i + 2));
        ds.X.resize(n, 5);
        ds.X.col(0).setOnes();
        ds.X.col(1) = sex.array() * rooms.array();
        ds.X.col(2) = (1.0 - sex.array()) * rooms.array();
        ds.X.col(3) = sex.array() * dist.array();
        ds.X.col(4) = (1.0 - sex.array()) * dist.array();
        ds.Y = rent;
        ds.x_names = {"intercept", "male_rooms", "female_rooms", "male_distance",
                      "female_distance"};
        ds.y_names = {"rent"};
        ds.note = "student apartment rents; regressors split by gender dummy";
        return ds;
    }

    // chemical
    ds.X.resize(n, 4);
    ds.X.col(0).setOnes();
    ds.X.col(1) = raw.col(column_index(header, "x1", path));
    ds.X.col(2) = raw.col(column_index(header, "x2", path));
    ds.X.col(3) = raw.col(column_index(header, "x3", path));
    ds.Y.resize(n, 3);
    ds.Y.col(0) = raw.col(column_index(header, "y1", path));
    ds.Y.col(1) = raw.col(column_index(header, "y2", path));
    ds.Y.col(2) = raw.col(column_index(header, "y3", path));
    ds.x_names = {"intercept", "temperature", "concentration", "time"};
    ds.y_names = {"unchanged", "converted", "byproduct"};
    ds.note = "chemical reaction outcomes on process conditions";
    return ds;
}

}  // namespace ineqreg
