#pragma once
// The proof families for phi(n).
//
// build_phi_proof(n) is the normal minimal-logic proof whose final rule
// discharges exactly 2^n leaves assuming xi(n). It is built inductively: the
// step substitutes the previous proof body with xi_shift and plugs the result
// into a fixed skeleton twice. Both plug-in positions reference the SAME
// subproof object, so the physical proof grows linearly while its tree
// unfolding doubles per step.
//
// build_phi_classical(n) is the linear classical proof: one Peirce block per
// level, 6n+2 nodes, a single discharged xi(n) leaf.

#include "mimpl/nd.hpp"

namespace mimpl {

// The normal proof of x from two open assumptions of chi(a, x).
// Requires a to be an atom not occurring in x.
Proof build_sigma(Formula a, Formula x);

// Normal, closed, concludes phi(n); the last rule discharges 2^n leaves.
Proof build_phi_proof(int n);

// Closed classical proof of ((c->d)->c)->c: assume (c->d)->c [1] and c->d
// [2], eliminate to c, Peirce-discharge 2, introduce discharging 1. 5 nodes.
Proof build_peirce_proof(Formula c, Formula d);

// Closed classical proof of phi(n), affine in n.
Proof build_phi_classical(int n);

}  // namespace mimpl
