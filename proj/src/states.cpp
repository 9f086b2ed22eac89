// Copyright 2026 The dynlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dynlearn/states.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "dynlearn/error.hpp"

namespace dynlearn {

namespace {

using cd = std::complex<double>;

Matrix4c from_ket(Vector4c psi) {
  const double n = psi.norm();
  if (!std::isfinite(n) || n < 1e-300) throw ValidationError("state ket has zero or non-finite norm");
  psi /= n;
  return projector(psi);
}

Vector4c ket(cd a00, cd a01, cd a10, cd a11) {
  Vector4c v;
  v << a00, a01, a10, a11;
  return v;
}

void require_finite(double x, std::string_view what) {
  if (!std::isfinite(x)) throw ValidationError("non-finite state parameter " + std::string(what));
}

cd phase(double theta) { return std::polar(1.0, theta); }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

constexpr const char* kAmpKeys[4] = {"00", "01", "10", "11"};

struct KeyValue {
  std::string key;
  double value;
};

std::vector<KeyValue> parameters_of(const StateFamily& state) {
  return std::visit(
      Overloaded{
          [](const family::Bell& s) { return std::vector<KeyValue>{{"theta", s.theta}}; },
          [](const family::Epr& s) { return std::vector<KeyValue>{{"theta", s.theta}}; },
          [](const family::Flat&) { return std::vector<KeyValue>{}; },
          [](const family::C& s) {
            return std::vector<KeyValue>{{"gamma", s.gamma}, {"theta", s.theta}};
          },
          [](const family::P&) { return std::vector<KeyValue>{}; },
          [](const family::P2&) { return std::vector<KeyValue>{}; },
          [](const family::P3& s) { return std::vector<KeyValue>{{"gamma", s.gamma}}; },
          [](const family::PPhase& s) { return std::vector<KeyValue>{{"theta", s.theta}}; },
          [](const family::PPhase2& s) { return std::vector<KeyValue>{{"theta", s.theta}}; },
          [](const family::M&) { return std::vector<KeyValue>{}; },
          [](const family::Werner& s) { return std::vector<KeyValue>{{"F", s.F}}; },
          [](const family::MPrime& s) {
            return std::vector<KeyValue>{{"gamma", s.gamma}, {"on11", s.on11 ? 1.0 : 0.0}};
          },
          [](const family::Product& s) {
            return std::vector<KeyValue>{
                {"alpha", s.alpha}, {"beta", s.beta}, {"gamma", s.gamma}, {"delta", s.delta}};
          },
          [](const family::Ket& s) {
            std::vector<KeyValue> out;
            for (int k = 0; k < 4; ++k) {
              out.push_back({std::string("re") + kAmpKeys[k], s.amplitudes(k).real()});
              out.push_back({std::string("im") + kAmpKeys[k], s.amplitudes(k).imag()});
            }
            return out;
          },
      },
      state);
}

[[noreturn]] void unknown_key(const StateFamily& state, std::string_view key) {
  throw ValidationError("family '" + family_name(state) + "' has no parameter '" +
                        std::string(key) + "'");
}

StateFamily default_family(std::string_view name) {
  if (name == "bell") return family::Bell{};
  if (name == "epr") return family::Epr{};
  if (name == "flat") return family::Flat{};
  if (name == "c") return family::C{};
  if (name == "p") return family::P{};
  if (name == "p2") return family::P2{};
  if (name == "p3") return family::P3{};
  if (name == "p-phase") return family::PPhase{};
  if (name == "p-phase2") return family::PPhase2{};
  if (name == "m") return family::M{};
  if (name == "werner") return family::Werner{};
  if (name == "mprime") return family::MPrime{};
  if (name == "product") return family::Product{};
  if (name == "ket") return family::Ket{};
  throw ValidationError("unknown state family '" + std::string(name) + "'");
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Vector4c real_product(double angle_a, double angle_b) {
  const double ca = std::cos(angle_a), sa = std::sin(angle_a);
  const double cb = std::cos(angle_b), sb = std::sin(angle_b);
  return ket(ca * cb, ca * sb, sa * cb, sa * sb);
}

}  // namespace

Vector4c basis_ket(int index) {
  if (index < 0 || index > 3) throw ValidationError("basis index out of range");
  Vector4c v = Vector4c::Zero();
  v(index) = 1.0;
  return v;
}

Vector4c phi_plus() { return ket(1, 0, 0, 1) / std::sqrt(2.0); }

Matrix4c make(const StateFamily& state) {
  for (const auto& kv : parameters_of(state)) require_finite(kv.value, kv.key);
  return std::visit(
      Overloaded{
          [](const family::Bell& s) { return from_ket(ket(1, 0, 0, phase(s.theta))); },
          [](const family::Epr& s) { return from_ket(ket(0, 1, phase(s.theta), 0)); },
          [](const family::Flat&) { return from_ket(ket(1, 1, 1, 1)); },
          [](const family::C& s) {
            return from_ket(ket(1, s.gamma * phase(s.theta), 0, 0));
          },
          [](const family::P&) { return from_ket(ket(0, 1, 1, 1)); },
          [](const family::P2&) { return from_ket(ket(1, 0, 1, 1)); },
          [](const family::P3& s) {
            if (s.gamma < 0) throw ValidationError("p3 gamma must be non-negative");
            return from_ket(ket(1, s.gamma, 0, 1));
          },
          [](const family::PPhase& s) { return from_ket(ket(1, phase(s.theta), 0, 1)); },
          [](const family::PPhase2& s) { return from_ket(ket(1, 1, 0, phase(s.theta))); },
          [](const family::M&) {
            Matrix4c m = Matrix4c::Zero();
            m(0, 0) = 0.5;
            m(3, 3) = 0.5;
            return m;
          },
          [](const family::Werner& s) {
            if (s.F < 0 || s.F > 1) throw ValidationError("werner F must lie in [0, 1]");
            const double r = std::sqrt(0.5);
            const Matrix4c phi_p = projector(Vector4c(ket(r, 0, 0, r)));
            const Matrix4c phi_m = projector(Vector4c(ket(r, 0, 0, -r)));
            const Matrix4c psi_p = projector(Vector4c(ket(0, r, r, 0)));
            const Matrix4c psi_m = projector(Vector4c(ket(0, r, -r, 0)));
            return Matrix4c(s.F * phi_p + ((1.0 - s.F) / 3.0) * (phi_m + psi_p + psi_m));
          },
          [](const family::MPrime& s) {
            if (s.gamma < 0) throw ValidationError("mprime gamma must be non-negative");
            const Matrix4c extra = projector(basis_ket(s.on11 ? 3 : 1));
            return Matrix4c((s.gamma * extra + projector(phi_plus())) / (1.0 + s.gamma));
          },
          [](const family::Product& s) {
            Eigen::Vector2cd a, b;
            a << s.beta, s.alpha;
            b << s.delta, s.gamma;
            if (a.norm() < 1e-300 || b.norm() < 1e-300)
              throw ValidationError("product factor has zero norm");
            a.normalize();
            b.normalize();
            Vector4c v;
            for (int i = 0; i < 2; ++i)
              for (int j = 0; j < 2; ++j) v(2 * i + j) = a(i) * b(j);
            return projector(v);
          },
          [](const family::Ket& s) { return from_ket(s.amplitudes); },
      },
      state);
}

std::string family_name(const StateFamily& state) {
  return std::visit(
      Overloaded{
          [](const family::Bell&) { return "bell"; },
          [](const family::Epr&) { return "epr"; },
          [](const family::Flat&) { return "flat"; },
          [](const family::C&) { return "c"; },
          [](const family::P&) { return "p"; },
          [](const family::P2&) { return "p2"; },
          [](const family::P3&) { return "p3"; },
          [](const family::PPhase&) { return "p-phase"; },
          [](const family::PPhase2&) { return "p-phase2"; },
          [](const family::M&) { return "m"; },
          [](const family::Werner&) { return "werner"; },
          [](const family::MPrime&) { return "mprime"; },
          [](const family::Product&) { return "product"; },
          [](const family::Ket&) { return "ket"; },
      },
      state);
}

std::vector<std::string> family_names() {
  return {"bell", "epr", "flat", "c", "p", "p2", "p3", "p-phase", "p-phase2",
          "m", "werner", "mprime", "product", "ket"};
}

std::string to_spec(const StateFamily& state) {
  std::string out = family_name(state);
  const auto params = parameters_of(state);
  for (std::size_t k = 0; k < params.size(); ++k) {
    out += (k == 0 ? ':' : ',');
    out += params[k].key + "=" + format_double(params[k].value);
  }
  return out;
}

void set_parameter(StateFamily& state, std::string_view key, double value) {
  require_finite(value, key);
  std::visit(
      Overloaded{
          [&](family::Bell& s) { key == "theta" ? void(s.theta = value) : unknown_key(state, key); },
          [&](family::Epr& s) { key == "theta" ? void(s.theta = value) : unknown_key(state, key); },
          [&](family::C& s) {
            if (key == "gamma") s.gamma = value;
            else if (key == "theta") s.theta = value;
            else unknown_key(state, key);
          },
          [&](family::P3& s) { key == "gamma" ? void(s.gamma = value) : unknown_key(state, key); },
          [&](family::PPhase& s) {
            key == "theta" ? void(s.theta = value) : unknown_key(state, key);
          },
          [&](family::PPhase2& s) {
            key == "theta" ? void(s.theta = value) : unknown_key(state, key);
          },
          [&](family::Werner& s) { key == "F" ? void(s.F = value) : unknown_key(state, key); },
          [&](family::MPrime& s) {
            if (key == "gamma") s.gamma = value;
            else if (key == "on11") s.on11 = value != 0.0;
            else unknown_key(state, key);
          },
          [&](family::Product& s) {
            if (key == "alpha") s.alpha = value;
            else if (key == "beta") s.beta = value;
            else if (key == "gamma") s.gamma = value;
            else if (key == "delta") s.delta = value;
            else unknown_key(state, key);
          },
          [&](family::Ket& s) {
            if (key.size() == 4 && (key.substr(0, 2) == "re" || key.substr(0, 2) == "im")) {
              for (int k = 0; k < 4; ++k) {
                if (key.substr(2) != kAmpKeys[k]) continue;
                const cd old = s.amplitudes(k);
                s.amplitudes(k) = key[0] == 'r' ? cd(value, old.imag()) : cd(old.real(), value);
                return;
              }
            }
            unknown_key(state, key);
          },
          [&](auto&) { unknown_key(state, key); },
      },
      state);
}

StateFamily parse_family(std::string_view spec) {
  const auto colon = spec.find(':');
  StateFamily state = default_family(spec.substr(0, colon));
  if (colon == std::string_view::npos) return state;
  std::string_view rest = spec.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw ValidationError("malformed family parameter '" + std::string(item) + "'");
    const std::string_view val = item.substr(eq + 1);
    double value = 0.0;
    const auto res = std::from_chars(val.data(), val.data() + val.size(), value);
    if (res.ec != std::errc() || res.ptr != val.data() + val.size())
      throw ValidationError("malformed number '" + std::string(val) + "'");
    set_parameter(state, item.substr(0, eq), value);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return state;
}

std::vector<Matrix4c> product_grid(int n_per_axis, std::uint64_t seed) {
  if (n_per_axis < 1) throw ValidationError("product grid needs at least one point per axis");
  std::mt19937_64 rng(seed);
  const double offset_a = uniform01(rng);
  const double offset_b = uniform01(rng);
  const double step = std::numbers::pi / n_per_axis;
  std::vector<Matrix4c> out;
  out.reserve(static_cast<std::size_t>(n_per_axis) * n_per_axis);
  for (int i = 0; i < n_per_axis; ++i)
    for (int j = 0; j < n_per_axis; ++j)
      out.push_back(projector(real_product(step * (i + offset_a), step * (j + offset_b))));
  return out;
}

std::vector<Matrix4c> mixed_grid(int count, std::uint64_t seed) {
  if (count < 0) throw ValidationError("mixed grid count must be non-negative");
  std::mt19937_64 rng(seed);
  std::vector<Matrix4c> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    const int parts = 2 + static_cast<int>(rng() % 3);
    // Normalized exponentials give a uniform draw on the simplex.
    std::vector<double> weights(parts);
    double total = 0.0;
    for (auto& wgt : weights) {
      wgt = -std::log1p(-uniform01(rng));
      total += wgt;
    }
    Matrix4c rho = Matrix4c::Zero();
    for (int k = 0; k < parts; ++k) {
      const double a = std::numbers::pi * uniform01(rng);
      const double b = std::numbers::pi * uniform01(rng);
      rho += (weights[k] / total) * projector(real_product(a, b));
    }
    out.push_back(rho);
  }
  return out;
}

}  // namespace dynlearn
