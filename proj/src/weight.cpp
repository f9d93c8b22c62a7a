#include "fockzero/weight.hpp"

#include <cmath>

#include "fockzero/error.hpp"

namespace fockzero {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require_log_domain(double t) {
    require(t > 1.0, ErrorKind::domain, "log-perturbed weight is defined for t > 1");
}

}  // namespace

WeightProfile::WeightProfile(WeightKind kind) : kind_(kind) {
    std::visit(overloaded{
                   [](const ClassicalWeight& w) {
                       require(w.alpha > 0.0, ErrorKind::domain, "classical weight needs alpha > 0");
                   },
                   [](const PowerWeight& w) {
                       require(w.rho > 0.0, ErrorKind::domain, "power weight needs rho > 0");
                   },
                   [](const LogPerturbedWeight& w) {
                       require(w.rho > 0.0, ErrorKind::domain, "log-perturbed weight needs rho > 0");
                       require(std::isfinite(w.c), ErrorKind::domain, "log-perturbed weight needs finite c");
                   },
               },
               kind_);
}

double WeightProfile::phi(double t) const {
    return std::visit(overloaded{
                          [t](const ClassicalWeight& w) { return 0.5 * w.alpha * t * t; },
                          [t](const PowerWeight& w) { return std::pow(t, w.rho); },
                          [t](const LogPerturbedWeight& w) {
                              require_log_domain(t);
                              return std::pow(t, w.rho) * std::pow(std::log(t), w.c);
                          },
                      },
                      kind_);
}

double WeightProfile::dphi(double t) const {
    return std::visit(overloaded{
                          [t](const ClassicalWeight& w) { return w.alpha * t; },
                          [t](const PowerWeight& w) { return w.rho * std::pow(t, w.rho - 1.0); },
                          [t](const LogPerturbedWeight& w) {
                              require_log_domain(t);
                              const double log_t = std::log(t);
                              // φ′ = φ/t · (ρ + c/log t)
                              return std::pow(t, w.rho - 1.0) * std::pow(log_t, w.c) * (w.rho + w.c / log_t);
                          },
                      },
                      kind_);
}

double WeightProfile::rho_limit() const noexcept {
    return std::visit(overloaded{
                          [](const ClassicalWeight&) { return 2.0; },
                          [](const PowerWeight& w) { return w.rho; },
                          [](const LogPerturbedWeight& w) { return w.rho; },
                      },
                      kind_);
}

double WeightProfile::proximate_order(double t) const {
    return std::visit(overloaded{
                          [t](const ClassicalWeight& w) { return 2.0 + std::log(0.5 * w.alpha) / std::log(t); },
                          [](const PowerWeight& w) { return w.rho; },
                          [t](const LogPerturbedWeight& w) {
                              require_log_domain(t);
                              const double log_t = std::log(t);
                              return w.rho + w.c * std::log(log_t) / log_t;
                          },
                      },
                      kind_);
}

double WeightProfile::proximate_order_derivative(double t) const {
    return std::visit(overloaded{
                          [t](const ClassicalWeight& w) {
                              const double log_t = std::log(t);
                              return -std::log(0.5 * w.alpha) / (t * log_t * log_t);
                          },
                          [](const PowerWeight&) { return 0.0; },
                          [t](const LogPerturbedWeight& w) {
                              require_log_domain(t);
                              const double log_t = std::log(t);
                              return w.c * (1.0 - std::log(log_t)) / (t * log_t * log_t);
                          },
                      },
                      kind_);
}

bool WeightProfile::has_integer_order() const noexcept {
    const double rho = rho_limit();
    return rho == std::floor(rho);
}

}  // namespace fockzero
