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

#pragma once

// Constructors for the two-qubit state families used in training, testing and
// the sweeps, plus deterministic separable grids.
//
// Families are addressable by text, "name" or "name:key=value,key=value", e.g.
// "bell:theta=3.14159", "werner:F=0.7", "ket:re10=1,re11=0.9".

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "dynlearn/qcore.hpp"

namespace dynlearn {

namespace family {

/// |00> + e^{i theta}|11>
struct Bell { double theta = 0.0; };
/// |01> + e^{i theta}|10>
struct Epr { double theta = 0.0; };
/// (|0> + |1>)(|0> + |1>)
struct Flat {};
/// |0>(|0> + gamma e^{i theta}|1>)
struct C { double gamma = 0.5; double theta = 0.0; };
/// |01> + |10> + |11>
struct P {};
/// |00> + |10> + |11>
struct P2 {};
/// |00> + |11> + gamma |01>
struct P3 { double gamma = 1.0; };
/// |00> + |11> + e^{i theta}|01>
struct PPhase { double theta = 0.0; };
/// |00> + e^{i theta}|11> + |01>
struct PPhase2 { double theta = 0.0; };
/// (|00><00| + |11><11|)/2
struct M {};
/// F |Phi+><Phi+| + (1-F)/3 (other three Bell projectors)
struct Werner { double F = 1.0; };
/// (gamma |01><01| + |Phi+><Phi+|)/(1 + gamma); with on11 the |11><11| variant.
struct MPrime { double gamma = 1.0; bool on11 = false; };
/// (alpha|1> + beta|0>)_A (gamma|1> + delta|0>)_B, real amplitudes.
struct Product { double alpha = 0.0; double beta = 1.0; double gamma = 0.0; double delta = 1.0; };
/// Arbitrary amplitudes, normalized on construction.
struct Ket { Vector4c amplitudes = Vector4c::Zero(); };

}  // namespace family

using StateFamily =
    std::variant<family::Bell, family::Epr, family::Flat, family::C, family::P, family::P2,
                 family::P3, family::PPhase, family::PPhase2, family::M, family::Werner,
                 family::MPrime, family::Product, family::Ket>;

/// Density matrix of the family member. Throws ValidationError for F outside
/// [0, 1], negative gamma where disallowed, non-finite values or a zero ket.
Matrix4c make(const StateFamily& state);

std::string family_name(const StateFamily& state);
/// Canonical text form, parseable by parse_family.
std::string to_spec(const StateFamily& state);
StateFamily parse_family(std::string_view spec);
/// Sets one named parameter; ValidationError if the family has no such key.
void set_parameter(StateFamily& state, std::string_view key, double value);
std::vector<std::string> family_names();

/// Bell |Phi+> = (|00> + |11>)/sqrt 2.
Vector4c phi_plus();
Vector4c basis_ket(int index);

/// Deterministic grid of n_per_axis^2 real product states. The seed shifts the
/// grid inside its first cell.
std::vector<Matrix4c> product_grid(int n_per_axis, std::uint64_t seed);

/// `count` convex mixtures of 2 to 4 real product states with weights drawn
/// uniformly from the simplex.
std::vector<Matrix4c> mixed_grid(int count, std::uint64_t seed);

}  // namespace dynlearn
