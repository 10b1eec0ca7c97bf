#include "ninepoint/matrix_market.hpp"

#include <cstdio>
#include <stdexcept>
#include <string>

#include "ninepoint/version.hpp"

namespace ninepoint {

void write_matrix_market(const Matrix& a, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("write_matrix_market: cannot open " + path);

    int nnz = 0;
    for (double v : a.data()) {
        if (v != 0.0) ++nnz;
    }

    std::fprintf(f, "%%%%MatrixMarket matrix coordinate real general\n");
    std::fprintf(f, "%% ninepoint %s\n", kVersion);
    std::fprintf(f, "%d %d %d\n", a.rows(), a.cols(), nnz);
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            const double v = a(i, j);
            if (v != 0.0) std::fprintf(f, "%d %d %.17g\n", i + 1, j + 1, v);
        }
    }
    std::fclose(f);
}

} // namespace ninepoint
