#pragma once

// The fixed 30-sequent corpus: the first 15 derivable in IPL, the last 15
// not, as classified by the decision procedure and corroborated by
// countermodels in the nj tests.

#include <array>
#include <string_view>

namespace ibes::testing {

inline constexpr std::array<std::string_view, 15> kDerivableCorpus = {
    "p |- p",
    "|- p -> p",
    "p & q |- q",
    "p & q |- q & p",
    "|- p -> q -> p",
    "|- (p -> q -> r) -> (p -> q) -> p -> r",
    "p, q |- p & q",
    "|- p -> p | q",
    "p | q |- q | p",
    "|- p | q -> (p -> r) -> (q -> r) -> r",
    "bot |- p",
    "|- bot -> p",
    "|- ((p | (p -> bot)) -> bot) -> bot",
    "p -> q, q -> r |- p -> r",
    "|- (p & q -> r) -> p -> q -> r",
};

inline constexpr std::array<std::string_view, 15> kUnderivableCorpus = {
    "|- p",
    "|- p | (p -> bot)",
    "|- ((p -> q) -> p) -> p",
    "|- ((p -> bot) -> bot) -> p",
    "p -> q | r |- (p -> q) | (p -> r)",
    "p | q |- p",
    "|- (p -> q) | (q -> p)",
    "q |- p",
    "p -> q |- q -> p",
    "(p & q) -> bot |- (p -> bot) | (q -> bot)",
    "|- bot",
    "(p -> bot) -> bot |- p",
    "|- (p | q) -> p & q",
    "p |- p & q",
    "(p -> bot) -> q | r |- ((p -> bot) -> q) | ((p -> bot) -> r)",
};

}  // namespace ibes::testing
