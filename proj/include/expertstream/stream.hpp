#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>

#include "expertstream/types.hpp"

namespace expertstream {

// Materialized prediction stream: T x n bit matrix (day-major) plus one
// outcome bit per day.
struct ExpertStream {
  StreamSpec spec;
  std::vector<Bit> matrix;    // spec.T * spec.n entries
  std::vector<Bit> outcomes;  // spec.T entries

  std::span<const Bit> day_predictions(std::size_t t) const {
    return std::span<const Bit>(matrix).subspan(t * spec.n, spec.n);
  }

  Bit outcome(std::size_t t) const { return outcomes[t]; }

  DayRecord day(std::size_t t) const {
    const auto preds = day_predictions(t);
    return DayRecord{std::vector<Bit>(preds.begin(), preds.end()), outcomes[t]};
  }

  void validate() const {
    spec.validate();
    if (matrix.size() != spec.n * spec.T)
      throw std::invalid_argument("ExpertStream: matrix size does not match n*T");
    if (outcomes.size() != spec.T)
      throw std::invalid_argument("ExpertStream: outcome count does not match T");
    for (Bit b : matrix) check_bit(b, "ExpertStream");
    for (Bit b : outcomes) check_bit(b, "ExpertStream");
  }
};

struct BestExpert {
  std::size_t index = 0;
  std::size_t mistakes = 0;
};

// Offline scan for the single best expert; ties break to the lowest index.
inline BestExpert best_expert(const ExpertStream& stream) {
  stream.validate();
  const std::size_t n = stream.spec.n;
  std::vector<std::size_t> mistakes(n, 0);
  for (std::size_t t = 0; t < stream.spec.T; ++t) {
    const auto preds = stream.day_predictions(t);
    const Bit y = stream.outcomes[t];
    for (std::size_t i = 0; i < n; ++i)
      mistakes[i] += (preds[i] != y) ? 1u : 0u;
  }
  BestExpert best{0, mistakes[0]};
  for (std::size_t i = 1; i < n; ++i)
    if (mistakes[i] < best.mistakes) best = BestExpert{i, mistakes[i]};
  return best;
}

// Text format: first line "n T", then one line per day holding n prediction
// characters ('0'/'1'), a single space, and the outcome bit.
inline void save_matrix(const ExpertStream& stream, std::ostream& out) {
  stream.validate();
  out << stream.spec.n << ' ' << stream.spec.T << '\n';
  for (std::size_t t = 0; t < stream.spec.T; ++t) {
    const auto preds = stream.day_predictions(t);
    std::string line(stream.spec.n, '0');
    for (std::size_t i = 0; i < preds.size(); ++i)
      line[i] = preds[i] ? '1' : '0';
    out << line << ' ' << (stream.outcomes[t] ? '1' : '0') << '\n';
  }
}

inline ExpertStream load_matrix(std::istream& in) {
  std::size_t n = 0, T = 0;
  std::string header;
  if (!std::getline(in, header))
    throw std::invalid_argument("matrix: missing header line");
  {
    std::istringstream hs(header);
    if (!(hs >> n >> T))
      throw std::invalid_argument("matrix: header must be \"n T\"");
    std::string tail;
    if (hs >> tail) throw std::invalid_argument("matrix: trailing tokens in header");
  }
  if (n < 1 || T < 1) throw std::invalid_argument("matrix: n and T must be positive");

  ExpertStream stream;
  stream.spec = StreamSpec{n, T, T, StreamSource::StoredMatrix};
  stream.matrix.reserve(n * T);
  stream.outcomes.reserve(T);
  std::string line;
  for (std::size_t t = 0; t < T; ++t) {
    if (!std::getline(in, line))
      throw std::invalid_argument("matrix: fewer day lines than T");
    if (line.size() != n + 2 || line[n] != ' ')
      throw std::invalid_argument("matrix: malformed day line " + std::to_string(t + 1));
    for (std::size_t i = 0; i < n; ++i) {
      const char c = line[i];
      if (c != '0' && c != '1')
        throw std::invalid_argument("matrix: prediction characters must be 0 or 1");
      stream.matrix.push_back(c == '1' ? Bit{1} : Bit{0});
    }
    const char y = line[n + 1];
    if (y != '0' && y != '1')
      throw std::invalid_argument("matrix: outcome character must be 0 or 1");
    stream.outcomes.push_back(y == '1' ? Bit{1} : Bit{0});
  }
  while (std::getline(in, line)) {
    if (!line.empty())
      throw std::invalid_argument("matrix: more day lines than T");
  }
  stream.validate();
  return stream;
}

}  // namespace expertstream
