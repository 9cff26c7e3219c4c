#include "locbo/opt/trace.hpp"

#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

namespace locbo::opt {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Trace::csv_header(int dim) {
  std::ostringstream os;
  os << "t";
  for (int i = 0; i < dim; ++i) os << ",x" << i;
  os << ",y,L,U,lambda,covered,acq,incumbent,regret";
  return os.str();
}

void Trace::write_csv(std::ostream& os) const {
  os << csv_header(dim()) << "\n";
  for (const auto& r : rows) {
    os << r.t;
    for (Eigen::Index i = 0; i < r.x.size(); ++i) os << "," << format_double(r.x(i));
    os << "," << format_double(r.y) << "," << format_double(r.lower) << ","
       << format_double(r.upper) << "," << format_double(r.lambda) << "," << r.covered
       << "," << format_double(r.acq) << "," << format_double(r.incumbent) << ","
       << format_double(r.regret) << "\n";
  }
}

nlohmann::json Trace::to_json() const {
  nlohmann::json j;
  j["problem"] = problem;
  j["config"] = {{"method", method_name(config.method)},
                 {"alpha", config.alpha},
                 {"eta1", config.eta1},
                 {"w", config.decay_w},
                 {"l", std::isinf(config.loc_length) ? nlohmann::json("inf")
                                                     : nlohmann::json(config.loc_length)},
                 {"kappa", config.loc_kappa},
                 {"lambda", config.reg_lambda},
                 {"T", config.horizon},
                 {"n_init", config.n_init},
                 {"n_candidates", config.n_candidates},
                 {"n_mc", config.n_mc},
                 {"ocbo_grid_size", config.ocbo_grid_size},
                 {"seed", config.seed}};
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json x = nlohmann::json::array();
    for (Eigen::Index i = 0; i < r.x.size(); ++i) x.push_back(r.x(i));
    rows_json.push_back({{"t", r.t},
                         {"x", x},
                         {"y", r.y},
                         {"L", r.lower},
                         {"U", r.upper},
                         {"lambda", r.lambda},
                         {"covered", r.covered},
                         {"acq", r.acq},
                         {"incumbent", r.incumbent},
                         {"regret", r.regret}});
  }
  j["rows"] = rows_json;
  j["n_init"] = n_init;
  nlohmann::json xh = nlohmann::json::array();
  for (Eigen::Index i = 0; i < x_hat.size(); ++i) xh.push_back(x_hat(i));
  j["x_hat"] = xh;
  j["y_best"] = y_best;
  if (!conformal_state.empty())
    j["conformal_state"] = nlohmann::json::parse(conformal_state);
  return j;
}

}  // namespace locbo::opt
