#pragma once

#include <string>
#include <vector>

#include "ineqreg/linalg.hpp"

namespace ineqreg {

struct Dataset {
    Matrix X;
    Matrix Y;  // n x k (k = 1 for the univariate model)
    std::vector<std::string> x_names;
    std::vector<std::string> y_names;
    std::string note;
};

enum class DatasetFormat {
    rent,      // rent per person on gender-split rooms/distance regressors
    chemical,  // three reaction outcomes on temperature/concentration/time
};

/// Numeric CSV with a header row. Errors name the offending row/column.
Matrix load_csv(const std::string& path, std::vector<std::string>* header = nullptr);

Dataset load_dataset(const std::string& path, DatasetFormat format);

}  // namespace ineqreg
