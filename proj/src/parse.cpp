#include "parse.hpp"

#include <cctype>
#include <cstdlib>

namespace plunge {

namespace {

class Parser {
 public:
  Parser(const std::string& s, int d) : s_(s), d_(d) {}

  DomainPtr top() {
    auto p = spec();
    skip();
    if (i_ != s_.size()) error("trailing input");
    return p;
  }

 private:
  [[noreturn]] void error(const std::string& what) {
    fail(Status::invalid_argument, "domain spec: " + what + " at position " + std::to_string(i_) + " in '" + s_ + "'");
  }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool accept(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip();
    std::string out;
    while (i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_])))
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(s_[i_++])));
    if (out.empty()) error("expected a shape name");
    return out;
  }

  double number() {
    skip();
    const char* begin = s_.c_str() + i_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) error("expected a number");
    i_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  std::vector<double> numbers() {
    std::vector<double> v{number()};
    while (accept(',')) v.push_back(number());
    return v;
  }

  void arity(const std::string& name, const std::vector<double>& v, std::size_t n) {
    if (v.size() != n) error(name + " takes " + std::to_string(n) + " argument(s)");
  }

  DomainPtr spec() {
    const std::string name = ident();
    expect('(');
    DomainPtr out;
    if (name == "box") {
      auto v = numbers();
      if (v.size() == 1) v.assign(d_, v[0]);
      out = Domain::box(v);
    } else if (name == "ball") {
      auto v = numbers();
      arity(name, v, 1);
      out = Domain::ball(d_, v[0]);
    } else if (name == "annulus") {
      auto v = numbers();
      arity(name, v, 2);
      out = Domain::annulus(d_, v[0], v[1]);
    } else if (name == "boxminusball") {
      auto v = numbers();
      arity(name, v, 2);
      out = Domain::box_minus_ball(d_, v[0], v[1]);
    } else if (name == "squareminusdisk") {
      auto v = numbers();
      arity(name, v, 2);
      out = Domain::box_minus_ball(2, v[0], v[1]);
    } else if (name == "lshape") {
      auto v = numbers();
      arity(name, v, 2);
      out = Domain::l_shape(v[0], v[1]);
    } else if (name == "twobox") {
      auto v = numbers();
      arity(name, v, 2);
      if (!(v[1] > 0.5 * v[0])) error("twobox squares must not overlap");
      auto sq = Domain::box({v[0], v[0]});
      out = Domain::unite({Domain::shift(sq, {-v[1], 0.0}), Domain::shift(sq, {v[1], 0.0})});
    } else if (name == "union") {
      std::vector<DomainPtr> parts{spec()};
      while (accept(';') || accept(',')) parts.push_back(spec());
      out = Domain::unite(std::move(parts));
    } else if (name == "dilate") {
      auto base = spec();
      expect(',');
      out = Domain::dilate(base, number());
    } else if (name == "shift") {
      auto base = spec();
      expect(',');
      out = Domain::shift(base, numbers());
    } else {
      error("unknown shape '" + name + "'");
    }
    expect(')');
    return out;
  }

  const std::string& s_;
  int d_;
  std::size_t i_ = 0;
};

}  // namespace

DomainPtr parse_domain(const std::string& text, int default_dim) {
  require(default_dim >= 1, Status::invalid_argument, "dimension must be positive");
  return Parser(text, default_dim).top();
}

}  // namespace plunge
