#pragma once
// Renderers: bussproofs LaTeX and Graphviz DOT, for both proof object kinds.
//
// LaTeX and plain DOT unfold the proof tree (exponential for heavily shared
// proofs; the caller picks its sizes). DOT with shared=true emits one node
// per structural identity class instead, which is the honest picture of what
// the process actually stores.

#include <string>

#include "mimpl/nd.hpp"
#include "mimpl/sequent.hpp"

namespace mimpl {

// Proofs must check; renderers do not re-validate.
std::string nd_to_latex(const Proof& p);
std::string nd_to_dot(const Proof& p, bool shared);

std::string sequent_to_latex(const SequentProof& p);
std::string sequent_to_dot(const SequentProof& p, bool shared);

}  // namespace mimpl
