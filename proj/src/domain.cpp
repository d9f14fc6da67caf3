#include "szego/domain.hpp"

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

namespace szego {

namespace {

double norm2(std::span<const Complex> z) {
  double s = 0.0;
  for (auto& c : z) s += std::norm(c);
  return s;
}

}  // namespace

DerivativeJet derivative_jet_from_wirtinger(const Jet& jet, int n) {
  DerivativeJet out;
  out.value = jet.value().real();
  out.d1.resize(n);
  out.d2_mixed.assign(static_cast<size_t>(n) * n, 0.0);
  out.d2_pure.assign(static_cast<size_t>(n) * n, 0.0);
  out.d3 = CTensor3(n);
  for (int j = 0; j < n; ++j) {
    out.d1[j] = jet.derivative({j});
    for (int k = 0; k < n; ++k) {
      out.d2_mixed[static_cast<size_t>(j) * n + k] = jet.derivative({j, k + n});
      out.d2_pure[static_cast<size_t>(j) * n + k] = jet.derivative({j, k});
      for (int a = 0; a < n; ++a) out.d3(a, j, k) = jet.derivative({a, j, k + n});
    }
  }
  return out;
}

Domain Domain::ball(int n) {
  if (n < 1) throw PreconditionError("ball dimension must be >= 1");
  Domain d;
  d.kind_ = Kind::Ball;
  d.n_ = n;
  d.label_ = "ball(n=" + std::to_string(n) + ")";
  return d;
}

Domain Domain::annulus(double r) {
  if (!(r > 0.0 && r < 1.0)) throw PreconditionError("annulus inner radius must lie in (0,1)");
  Domain d;
  d.kind_ = Kind::Annulus;
  d.n_ = 1;
  d.r_ = r;
  std::ostringstream os;
  os << "annulus(r=" << r << ")";
  d.label_ = os.str();
  return d;
}

Domain Domain::fefferman(int n, const std::string& rho, const std::string& phi,
                         const std::string& psi, double collar_width, double box_halfwidth) {
  if (n < 2) throw PreconditionError("Fefferman model requires dimension n >= 2");
  if (!(collar_width > 0.0)) throw PreconditionError("collar width must be positive");
  Domain d;
  d.kind_ = Kind::Fefferman;
  d.n_ = n;
  d.collar_ = collar_width;
  d.box_ = box_halfwidth;
  d.rho_expr_ = Expr::parse(rho, n);
  d.phi_expr_ = Expr::parse(phi, n);
  d.psi_expr_ = Expr::parse(psi, n);
  d.label_ = "fefferman(n=" + std::to_string(n) + ")";
  d.validate_collar();
  return d;
}

void Domain::validate_collar() const {
  // Phi > 0 on a sample of the collar {-collar < rho < 0}
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(-box_, box_);
  int found = 0, tried = 0;
  while (found < 64 && tried < 200000) {
    ++tried;
    CVector z(n_);
    for (auto& c : z) c = Complex(u(rng), u(rng));
    double rv = rho_expr_->eval(z).real();
    if (rv < 0.0 && rv > -collar_) {
      ++found;
      double phi = phi_expr_->eval(z).real();
      if (!(phi > 0.0))
        throw ModelValidityError("Phi is not positive on the declared collar");
    }
  }
  if (found == 0)
    throw ModelValidityError("could not sample the declared collar inside the ambient box");
}

bool Domain::contains(std::span<const Complex> z) const {
  if (static_cast<int>(z.size()) != n_) throw PreconditionError("point dimension mismatch");
  switch (kind_) {
    case Kind::Ball:
      return norm2(z) < 1.0;
    case Kind::Annulus: {
      double a = std::abs(z[0]);
      return a > r_ && a < 1.0;
    }
    case Kind::Fefferman: {
      for (auto& c : z)
        if (std::abs(c.real()) > box_ || std::abs(c.imag()) > box_) return false;
      return rho_expr_->eval(z).real() < 0.0;
    }
  }
  return false;
}

double Domain::rho(std::span<const Complex> z) const {
  switch (kind_) {
    case Kind::Ball:
      return norm2(z) - 1.0;
    case Kind::Annulus: {
      // two-sided max form, used for containment/side tests only
      double t = std::norm(z[0]);
      return std::max(t - 1.0, r_ * r_ - t);
    }
    case Kind::Fefferman:
      return rho_expr_->eval(z).real();
  }
  return 0.0;
}

DerivativeJet Domain::rho_jet(std::span<const Complex> z) const {
  const int n = n_;
  switch (kind_) {
    case Kind::Ball: {
      DerivativeJet out;
      out.value = norm2(z) - 1.0;
      out.d1.resize(n);
      out.d2_mixed.assign(static_cast<size_t>(n) * n, 0.0);
      out.d2_pure.assign(static_cast<size_t>(n) * n, 0.0);
      out.d3 = CTensor3(n);
      for (int j = 0; j < n; ++j) {
        out.d1[j] = std::conj(z[j]);
        out.d2_mixed[static_cast<size_t>(j) * n + j] = 1.0;
      }
      return out;
    }
    case Kind::Annulus: {
      // jet of the active branch; not differentiable on the switch circle
      double t = std::norm(z[0]);
      DerivativeJet out;
      out.d1.resize(1);
      out.d2_mixed.assign(1, 0.0);
      out.d2_pure.assign(1, 0.0);
      out.d3 = CTensor3(1);
      if (t - 1.0 >= r_ * r_ - t) {
        out.value = t - 1.0;
        out.d1[0] = std::conj(z[0]);
        out.d2_mixed[0] = 1.0;
      } else {
        out.value = r_ * r_ - t;
        out.d1[0] = -std::conj(z[0]);
        out.d2_mixed[0] = -1.0;
      }
      return out;
    }
    case Kind::Fefferman:
      return derivative_jet_from_wirtinger(rho_expr_->eval_jet(z), n);
  }
  throw Error("unreachable domain kind");
}

const Expr& Domain::phi_expr() const {
  if (!phi_expr_) throw PreconditionError("phi recipe only exists for Fefferman models");
  return *phi_expr_;
}

const Expr& Domain::psi_expr() const {
  if (!psi_expr_) throw PreconditionError("psi recipe only exists for Fefferman models");
  return *psi_expr_;
}

const Expr& Domain::rho_expr() const {
  if (!rho_expr_) throw PreconditionError("rho recipe only exists for Fefferman models");
  return *rho_expr_;
}

double Domain::clearance(std::span<const Complex> z) const {
  if (kind_ == Kind::Annulus) {
    double a = std::abs(z[0]);
    return std::min(a - r_, 1.0 - a);
  }
  return -rho(z);
}

Domain Domain::from_spec(const std::string& spec) {
  auto trimmed = spec;
  trimmed.erase(0, trimmed.find_first_not_of(" \t\n"));
  if (!trimmed.empty() && trimmed[0] == '{') {
    nlohmann::json j = nlohmann::json::parse(trimmed, nullptr, false);
    if (j.is_discarded()) throw ParseError("invalid JSON domain spec");
    std::string kind = j.value("kind", "");
    if (kind == "ball") return ball(j.value("n", 1));
    if (kind == "annulus") return annulus(j.value("r", 0.5));
    if (kind == "fefferman") {
      if (!j.contains("rho") || !j.contains("phi") || !j.contains("psi"))
        throw ParseError("fefferman spec needs 'rho', 'phi' and 'psi' recipes");
      return fefferman(j.value("n", 2), j.at("rho").get<std::string>(),
                       j.at("phi").get<std::string>(), j.at("psi").get<std::string>(),
                       j.value("collar", 0.2), j.value("box", 2.0));
    }
    throw ParseError("unknown domain kind '" + kind + "'");
  }
  // shorthand: kind:key=value,key=value,...
  auto colon = trimmed.find(':');
  std::string kind = trimmed.substr(0, colon);
  std::map<std::string, std::string> kv;
  if (colon != std::string::npos) {
    std::string rest = trimmed.substr(colon + 1);
    size_t pos = 0;
    while (pos < rest.size()) {
      auto eq = rest.find('=', pos);
      if (eq == std::string::npos) throw ParseError("expected key=value in domain spec");
      std::string key = rest.substr(pos, eq - pos);
      // recipes may contain commas inside parentheses; scan with depth
      size_t end = eq + 1;
      int depth = 0;
      while (end < rest.size() && (depth > 0 || rest[end] != ',')) {
        if (rest[end] == '(') ++depth;
        if (rest[end] == ')') --depth;
        ++end;
      }
      kv[key] = rest.substr(eq + 1, end - eq - 1);
      pos = end + (end < rest.size() ? 1 : 0);
    }
  }
  if (kind == "ball") return ball(kv.count("n") ? std::stoi(kv["n"]) : 1);
  if (kind == "annulus") return annulus(kv.count("r") ? std::stod(kv["r"]) : 0.5);
  if (kind == "fefferman") {
    if (!kv.count("rho") || !kv.count("phi") || !kv.count("psi"))
      throw ParseError("fefferman spec needs rho, phi and psi recipes");
    return fefferman(kv.count("n") ? std::stoi(kv["n"]) : 2, kv["rho"], kv["phi"], kv["psi"],
                     kv.count("collar") ? std::stod(kv["collar"]) : 0.2,
                     kv.count("box") ? std::stod(kv["box"]) : 2.0);
  }
  throw ParseError("unknown domain kind '" + kind + "'");
}

}  // namespace szego
