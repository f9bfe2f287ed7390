#pragma once

#include <cstdint>
#include <random>

namespace gai {

// mt19937_64's output sequence is fixed by the standard; all distributions on
// top of it come from Boost.Random so streams match across standard libraries.
using Rng = std::mt19937_64;

// splitmix64 finalizer over (seed, stream). Used to give every arm and the
// policy its own reward/sampling stream within one run.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

double uniform01(Rng& rng);
bool bernoulli(Rng& rng, double p);
double normal(Rng& rng, double mean, double sigma);
double beta_variate(Rng& rng, double a, double b);

}  // namespace gai
