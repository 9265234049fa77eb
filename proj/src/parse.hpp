#pragma once

#include <string>

#include "geometry.hpp"

namespace plunge {

// Domain mini-language, case-insensitive:
//   box(w1,...,wd) ball(r) annulus(r0,r1) boxminusball(w,r) squareminusdisk(w,r)
//   lshape(w,notch) twobox(w,c) union(a;b;...) dilate(a,t) shift(a,v1,...,vd)
// Shapes without an explicit dimension use default_dim; box(w) is the cube of side w.
DomainPtr parse_domain(const std::string& text, int default_dim = 2);

}  // namespace plunge
