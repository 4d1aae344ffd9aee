#include "boolperc/distance_transform.hpp"

namespace boolperc {

Eigen::ArrayXXd squared_edt(const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& seeds) {
  const double inf = std::numeric_limits<double>::infinity();
  const Eigen::Index nx = seeds.rows();
  const Eigen::Index ny = seeds.cols();
  Eigen::ArrayXXd f = seeds.select(Eigen::ArrayXXd::Zero(nx, ny), inf);
  Eigen::ArrayXXd out(nx, ny);
  // First pass along the contiguous index, then across.
  Eigen::VectorXd line(nx);
  for (Eigen::Index j = 0; j < ny; ++j) {
    line = f.col(j).matrix();
    squared_edt_1d(line, out.col(j));
  }
  Eigen::VectorXd row_in(ny);
  Eigen::VectorXd row_out(ny);
  for (Eigen::Index i = 0; i < nx; ++i) {
    row_in = out.row(i).transpose().matrix();
    squared_edt_1d(row_in, row_out);
    out.row(i) = row_out.transpose().array();
  }
  return out;
}

}  // namespace boolperc
