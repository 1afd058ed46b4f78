#include "mimpl/constructions.hpp"

namespace mimpl {

namespace {

// Sigma with labels drawn from a caller-supplied counter, so the inductive
// construction can keep all labels distinct across levels.
Proof sigma_with_labels(Formula a, Formula x, int& next_label) {
  if (!a.is_atom()) throw std::invalid_argument("build_sigma: a must be an atom");
  if (contains_atom(x, a.atom_name()))
    throw std::invalid_argument("build_sigma: a must not occur in x");

  Formula ax = Formula::implies(a, x);          // a->x
  Formula pa = Formula::implies(ax, a);         // (a->x)->a
  Formula chi_ax = chi(a, x);                   // (((a->x)->a)->a)->x

  int l_a = next_label++;
  int l_vac = next_label++;
  int l_pa = next_label++;

  // [a] weakened to ((a->x)->a)->a (vacuous discharge), applied to chi to get
  // x, closed to a->x; that applied to [(a->x)->a] gives a, closed and applied
  // to the second chi leaf gives x again.
  Proof leaf_a = Proof::assume(a, l_a);
  Proof weak = Proof::intro(l_vac, pa, leaf_a);            // ((a->x)->a)->a
  Proof chi_leaf = Proof::assume(chi_ax);                  // open
  Proof x1 = Proof::elim(weak, chi_leaf);                  // x
  Proof to_ax = Proof::intro(l_a, a, x1);                  // a->x
  Proof leaf_pa = Proof::assume(pa, l_pa);
  Proof got_a = Proof::elim(to_ax, leaf_pa);               // a
  Proof to_pa_a = Proof::intro(l_pa, pa, got_a);           // ((a->x)->a)->a
  return Proof::elim(to_pa_a, chi_leaf);                   // x, chi open twice
}

}  // namespace

Proof build_sigma(Formula a, Formula x) {
  int next_label = 1;
  return sigma_with_labels(a, x, next_label);
}

Proof build_phi_proof(int n) {
  if (n < 1) throw std::invalid_argument("build_phi_proof(n) requires n >= 1");
  Formula c = Formula::atom("C");
  Formula d1 = Formula::atom("D1");

  int next_label = 1;
  // body(i) proves C from 2^i open leaves assuming xi(i).
  Proof body = sigma_with_labels(d1, c, next_label);

  for (int i = 1; i < n; ++i) {
    // The substituted previous body proves xi(1) from open xi(i+1) leaves.
    Proof inner = substitute_proof(body, xi_shift(i));

    Formula d1c = Formula::implies(d1, c);        // D1->C
    Formula pd1 = Formula::implies(d1c, d1);      // (D1->C)->D1

    int l_d = next_label++;
    int l_vac = next_label++;
    int l_p = next_label++;

    // Same skeleton as sigma, with `inner` standing in for the chi leaves.
    // Both references are to one object: the tree doubles, the DAG does not.
    Proof leaf_d = Proof::assume(d1, l_d);
    Proof weak = Proof::intro(l_vac, pd1, leaf_d);         // ((D1->C)->D1)->D1
    Proof c1 = Proof::elim(weak, inner);                   // C
    Proof to_d1c = Proof::intro(l_d, d1, c1);              // D1->C
    Proof leaf_p = Proof::assume(pd1, l_p);
    Proof got_d1 = Proof::elim(to_d1c, leaf_p);            // D1
    Proof to_pe1 = Proof::intro(l_p, pd1, got_d1);         // ((D1->C)->D1)->D1
    body = Proof::elim(to_pe1, inner);                     // C
  }

  int l_final = next_label++;
  Proof labelled = label_open_assumptions(body, xi(n), l_final);
  return Proof::intro(l_final, xi(n), labelled);
}

Proof build_peirce_proof(Formula c, Formula d) {
  Formula cd = Formula::implies(c, d);
  Formula pc = Formula::implies(cd, c);
  Proof leaf_pc = Proof::assume(pc, 1);
  Proof leaf_cd = Proof::assume(cd, 2);
  Proof got_c = Proof::elim(leaf_cd, leaf_pc);  // c
  Proof peirced = Proof::peirce(2, got_c);      // c, discharges c->d
  return Proof::intro(1, pc, peirced);          // ((c->d)->c)->c
}

Proof build_phi_classical(int n) {
  if (n < 1) throw std::invalid_argument("build_phi_classical(n) requires n >= 1");
  Formula c = Formula::atom("C");
  Proof current = Proof::assume(xi(n), 3);
  // xi(k) = (((D_k->x)->D_k)->D_k)->x with x = xi(k-1), bottoming out at C:
  // each Peirce block supplies the antecedent, stepping xi(n) down to C.
  for (int k = n; k >= 1; --k) {
    Formula x = k >= 2 ? xi(k - 1) : c;
    Proof block = build_peirce_proof(Formula::atom("D" + std::to_string(k)), x);
    current = Proof::elim(block, current);
  }
  return Proof::intro(3, xi(n), current);
}

}  // namespace mimpl
