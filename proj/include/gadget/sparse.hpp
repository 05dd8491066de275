#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace gadget {

// Real symmetric sparse matrix in CSR form. Assembly goes through a
// per-row std::map so duplicate (row,col) contributions merge in a fixed
// order regardless of insertion order (determinism).
struct CsrMatrix {
    int dim = 0;
    std::vector<size_t> rowptr;
    std::vector<int> col;
    std::vector<double> val;

    static CsrMatrix from_triplets(int dim,
                                   std::vector<std::tuple<int, int, double>> trip) {
        CsrMatrix M;
        M.dim = dim;
        std::vector<std::map<int, double>> rows(dim);
        for (auto& [r, c, v] : trip) rows[r][c] += v;
        M.rowptr.assign(dim + 1, 0);
        for (int r = 0; r < dim; ++r) {
            for (auto& [c, v] : rows[r])
                if (v != 0.0) {
                    M.col.push_back(c);
                    M.val.push_back(v);
                }
            M.rowptr[r + 1] = M.col.size();
        }
        return M;
    }

    void matvec(const double* x, double* y) const {
        for (int r = 0; r < dim; ++r) {
            double acc = 0;
            for (size_t k = rowptr[r]; k < rowptr[r + 1]; ++k)
                acc += val[k] * x[col[k]];
            y[r] = acc;
        }
    }
    Eigen::VectorXd operator*(const Eigen::VectorXd& x) const {
        Eigen::VectorXd y(dim);
        matvec(x.data(), y.data());
        return y;
    }

    Eigen::MatrixXd dense() const {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (size_t k = rowptr[r]; k < rowptr[r + 1]; ++k)
                M(r, col[k]) += val[k];
        return M;
    }

    double symmetry_defect() const {
        Eigen::MatrixXd M = dense();
        return (M - M.transpose()).cwiseAbs().maxCoeff();
    }

    size_t nnz() const { return val.size(); }

    // Matrix Market coordinate format, general symmetric storage is not
    // assumed (full pattern written; simplest for external audit).
    void write_matrix_market(const std::string& path) const {
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot open " + path);
        f << "%%MatrixMarket matrix coordinate real general\n";
        f << "% exported restricted Hamiltonian block\n";
        f << dim << " " << dim << " " << nnz() << "\n";
        char buf[32];
        for (int r = 0; r < dim; ++r)
            for (size_t k = rowptr[r]; k < rowptr[r + 1]; ++k) {
                std::snprintf(buf, sizeof buf, "%.17g", val[k]);
                f << (r + 1) << " " << (col[k] + 1) << " " << buf << "\n";
            }
    }
};

} // namespace gadget
