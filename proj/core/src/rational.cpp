#include "faircut/rational.hpp"

#include <cctype>

#include "faircut/errors.hpp"

namespace faircut {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rat parse_rational(std::string_view text) {
  // Trim surrounding whitespace.
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  require(!text.empty(), "empty rational literal");

  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  require(!text.empty(), "sign without digits in rational literal");

  std::string_view num = text;
  std::string_view den;
  char split = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '/' || text[i] == '.') {
      split = text[i];
      num = text.substr(0, i);
      den = text.substr(i + 1);
      break;
    }
  }

  Rat value;
  if (split == 0) {
    require(all_digits(num), "malformed rational literal: '" + std::string(text) + "'");
    value = Rat(mpz_class(std::string(num), 10));
  } else if (split == '/') {
    require(all_digits(num) && all_digits(den),
            "malformed rational literal: '" + std::string(text) + "'");
    mpz_class d(std::string(den), 10);
    require(d != 0, "zero denominator in rational literal");
    value = Rat(mpz_class(std::string(num), 10), d);
    value.canonicalize();
  } else {  // decimal point
    require(all_digits(num) || num.empty(), "malformed decimal literal: '" + std::string(text) + "'");
    require(all_digits(den), "malformed decimal literal: '" + std::string(text) + "'");
    mpz_class integral = num.empty() ? mpz_class(0) : mpz_class(std::string(num), 10);
    mpz_class frac(std::string(den), 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, den.size());
    value = Rat(integral * scale + frac, scale);
    value.canonicalize();
  }
  if (negative) value = -value;
  return value;
}

Rat make_rat(long num, long den) {
  require(den != 0, "zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

std::string rat_to_string(const Rat& q) {
  Rat canonical = q;
  canonical.canonicalize();
  return canonical.get_str();
}

mpz_class rat_floor(const Rat& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

mpz_class rat_ceil(const Rat& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

bool rat_is_integer(const Rat& q) { return q.get_den() == 1; }

long rat_floor_long(const Rat& q) {
  mpz_class r = rat_floor(q);
  internal_check(r.fits_slong_p(), "rational floor does not fit in long");
  return r.get_si();
}

long rat_ceil_long(const Rat& q) {
  mpz_class r = rat_ceil(q);
  internal_check(r.fits_slong_p(), "rational ceil does not fit in long");
  return r.get_si();
}

double rat_to_double(const Rat& q) { return q.get_d(); }

}  // namespace faircut
