#include "macsi/model.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "macsi/errors.hpp"

namespace macsi {

namespace {

std::string short_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::vector<int> VarSet::axes() const {
  std::vector<int> out;
  for (int a = 0; a < 4; ++a)
    if (mask_ & (1u << a)) out.push_back(a);
  return out;
}

ValidationReport validate_model(const MacModel& m) {
  ValidationReport report;

  if (m.state_prior.empty())
    report.push_back({"state_prior", 0.0, "state prior is empty"});
  if (m.input_size_a < 1 || m.input_size_b < 1)
    report.push_back({"inputs", 0.0, "input alphabets must be nonempty"});
  if (m.output_size < 1)
    report.push_back({"outputs", 0.0, "output alphabet must be nonempty"});
  if (m.obs_size_a < 1 || m.obs_size_b < 1)
    report.push_back({"quantizers", 0.0, "observation alphabets must be nonempty"});
  if (!report.empty()) return report;

  {
    double sum = 0.0;
    for (std::size_t i = 0; i < m.state_prior.size(); ++i) {
      if (m.state_prior[i] < 0.0)
        report.push_back({"state_prior[" + std::to_string(i) + "]", m.state_prior[i],
                          "state prior entry " + std::to_string(i) + " negative (" +
                              short_num(m.state_prior[i]) + ")"});
      sum += m.state_prior[i];
    }
    if (std::abs(sum - 1.0) > kInputTol)
      report.push_back({"state_prior", sum, "state prior sum " + short_num(sum)});
  }

  auto check_quantizer = [&](const std::vector<int>& q, int obs_size, const char* name) {
    if (static_cast<int>(q.size()) != m.state_size()) {
      report.push_back({name, static_cast<double>(q.size()),
                        std::string(name) + " length " + std::to_string(q.size()) +
                            " does not match |S|=" + std::to_string(m.state_size())});
      return;
    }
    for (std::size_t s = 0; s < q.size(); ++s) {
      if (q[s] < 0 || q[s] >= obs_size)
        report.push_back({std::string(name) + "[" + std::to_string(s) + "]",
                          static_cast<double>(q[s]),
                          std::string(name) + "(s=" + std::to_string(s) + ") value " +
                              std::to_string(q[s]) + " outside [0," +
                              std::to_string(obs_size) + ")"});
    }
  };
  check_quantizer(m.quantizer_a, m.obs_size_a, "quantizer_a");
  check_quantizer(m.quantizer_b, m.obs_size_b, "quantizer_b");

  const std::vector<int> want{m.state_size(), m.input_size_a, m.input_size_b,
                              m.output_size};
  if (m.kernel.dims() != want) {
    std::ostringstream os;
    os << "kernel shape (";
    for (std::size_t i = 0; i < m.kernel.dims().size(); ++i)
      os << (i ? "," : "") << m.kernel.dims()[i];
    os << ") does not match alphabets (" << want[0] << "," << want[1] << "," << want[2]
       << "," << want[3] << ")";
    report.push_back({"kernel", 0.0, os.str()});
    return report;  // slice checks are meaningless on a mis-shaped tensor
  }

  for (int s = 0; s < m.state_size(); ++s) {
    for (int xa = 0; xa < m.input_size_a; ++xa) {
      for (int xb = 0; xb < m.input_size_b; ++xb) {
        double sum = 0.0;
        bool negative = false;
        for (int y = 0; y < m.output_size; ++y) {
          const int idx[4] = {s, xa, xb, y};
          double v = m.kernel.at(std::span<const int>(idx, 4));
          if (v < 0.0) negative = true;
          sum += v;
        }
        std::string loc = "kernel(s=" + std::to_string(s) + ",xa=" + std::to_string(xa) +
                          ",xb=" + std::to_string(xb) + ")";
        if (negative)
          report.push_back({loc, sum, loc + " has a negative entry"});
        if (std::abs(sum - 1.0) > kInputTol)
          report.push_back({loc, sum, loc + " kernel row sum " + short_num(sum)});
      }
    }
  }
  return report;
}

void ensure_valid_model(const MacModel& m) {
  ValidationReport report = validate_model(m);
  if (report.empty()) return;
  std::ostringstream os;
  os << "invalid channel model (" << report.size() << " violation"
     << (report.size() == 1 ? "" : "s") << "):";
  for (const Violation& v : report) os << "\n  - " << v.message;
  throw ValidationError(os.str());
}

void ensure_valid_policy(const MacModel& m, const TeamPolicy& policy) {
  auto check_side = [&](const Conditional& cond, int obs_size, int input_size,
                        const char* name) {
    if (static_cast<int>(cond.size()) != obs_size)
      throw ValidationError(std::string(name) + " has " + std::to_string(cond.size()) +
                            " conditionals, model expects " + std::to_string(obs_size));
    for (int v = 0; v < obs_size; ++v) {
      const auto& row = cond[static_cast<std::size_t>(v)];
      if (static_cast<int>(row.size()) != input_size)
        throw ValidationError(std::string(name) + "[v=" + std::to_string(v) + "] has " +
                              std::to_string(row.size()) + " entries, model expects " +
                              std::to_string(input_size));
      double sum = 0.0;
      for (double p : row) {
        if (p < 0.0)
          throw ValidationError(std::string(name) + "[v=" + std::to_string(v) +
                                "] has a negative entry");
        sum += p;
      }
      if (std::abs(sum - 1.0) > kInputTol)
        throw ValidationError(std::string(name) + "[v=" + std::to_string(v) + "] sums to " +
                              short_num(sum));
    }
  };
  check_side(policy.pi_a, m.obs_size_a, m.input_size_a, "pi_a");
  check_side(policy.pi_b, m.obs_size_b, m.input_size_b, "pi_b");
}

JointDistribution build_joint(const MacModel& m, const TeamPolicy& policy) {
  ensure_valid_policy(m, policy);

  JointDistribution joint;
  joint.t = Tensor({m.state_size(), m.input_size_a, m.input_size_b, m.output_size});
  double* out = joint.t.data();
  const double* kern = m.kernel.data();

  std::size_t flat = 0;
  for (int s = 0; s < m.state_size(); ++s) {
    const double ps = m.state_prior[static_cast<std::size_t>(s)];
    const auto& row_a = policy.pi_a[static_cast<std::size_t>(m.quantizer_a[static_cast<std::size_t>(s)])];
    const auto& row_b = policy.pi_b[static_cast<std::size_t>(m.quantizer_b[static_cast<std::size_t>(s)])];
    for (int xa = 0; xa < m.input_size_a; ++xa) {
      const double pa = ps * row_a[static_cast<std::size_t>(xa)];
      for (int xb = 0; xb < m.input_size_b; ++xb) {
        const double pab = pa * row_b[static_cast<std::size_t>(xb)];
        for (int y = 0; y < m.output_size; ++y, ++flat) {
          out[flat] = pab * kern[flat];
        }
      }
    }
  }
  return joint;
}

Tensor marginal(const JointDistribution& joint, VarSet keep) {
  if (keep.empty()) throw ValidationError("marginal: empty keep set");

  const std::vector<int> axes = keep.axes();
  std::vector<int> out_dims;
  out_dims.reserve(axes.size());
  for (int a : axes) out_dims.push_back(joint.t.dim(a));
  Tensor out(out_dims);

  std::vector<int> idx(4);
  std::vector<int> kept(axes.size());
  for (std::size_t flat = 0; flat < joint.t.size(); ++flat) {
    joint.t.unravel(flat, idx);
    for (std::size_t i = 0; i < axes.size(); ++i)
      kept[i] = idx[static_cast<std::size_t>(axes[i])];
    out.at(kept) += joint.t[flat];
  }
  return out;
}

TeamPolicy uniform_policy(const MacModel& m) {
  TeamPolicy p;
  p.pi_a.assign(static_cast<std::size_t>(m.obs_size_a),
                std::vector<double>(static_cast<std::size_t>(m.input_size_a),
                                    1.0 / m.input_size_a));
  p.pi_b.assign(static_cast<std::size_t>(m.obs_size_b),
                std::vector<double>(static_cast<std::size_t>(m.input_size_b),
                                    1.0 / m.input_size_b));
  return p;
}

}  // namespace macsi
