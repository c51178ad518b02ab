#pragma once

#include "knotlab/laurent.hpp"
#include "knotlab/pillowcase.hpp"

#include <string>
#include <vector>

namespace knotlab {

// Signed 1-based generator indices; -i is the inverse of generator i.
using Word = std::vector<int>;

struct KnotPresentation {
    int generators = 0;
    std::vector<std::string> names;
    std::vector<Word> relators;
    Word meridian;
    Word longitude;
    // Every generator is conjugate to the meridian or its inverse (Wirtinger-type),
    // so it can be solved for as a rotation by alpha about an unknown axis.
    bool meridional = true;
    std::string label;
};

Word free_reduce(const Word& w);
Word inverse(const Word& w);
Word concat(const Word& a, const Word& b);
Word power(const Word& w, int k);

Word parse_word(const std::string& text, const std::vector<std::string>& names);
std::string word_str(const Word& w, const std::vector<std::string>& names);

// Exponent sums of each generator under H_1 -> Z with the meridian sent to +1.
// Throws PresentationInvalid unless H_1 is infinite cyclic generated by the meridian
// and the longitude is null-homologous.
std::vector<int> abelian_weights(const KnotPresentation& p);
void validate(const KnotPresentation& p);

KnotPresentation unknot_presentation();
// Closed braid; generator i is strand i at the top of the braid.
KnotPresentation presentation_from_braid(const std::vector<int>& braid, int strands = 0);
// Two-bridge knot b(p,q), p odd.
KnotPresentation presentation_from_two_bridge(int p, int q);
// <x,y | x^p = y^q> with mu = x^s y^t (sq + tp = 1) and lambda = x^p mu^{-pq}.
KnotPresentation torus_presentation(int p, int q);
// Same group with the longitude inverted.
KnotPresentation mirror_presentation(const KnotPresentation& p);

KnotPresentation parse_presentation_json(const std::string& text);
std::string presentation_to_json(const KnotPresentation& p);

LaurentPoly alexander_polynomial(const KnotPresentation& p);

SU2 eval_word(const Word& w, const std::vector<SU2>& gens);

}  // namespace knotlab
