#pragma once

#include <optional>

#include "maass/spectral.hpp"

namespace maass {

// W_s(y) = sqrt(y) K_s(y) for s = iR, via K_iR(y) = int_0^inf e^{-y cosh t} cos(Rt) dt
// with a certified truncation. Every result is intersected with the envelope
// |W_iR(y)| <= sqrt(pi/2) e^{-y}.
class BesselW {
  public:
    explicit BesselW(Ball R);
    Ball eval(const Ball& y) const;  // y > 0

  private:
    Ball R_;
};

// sup_n |a_n|/sqrt(n) under the Kim-Sarnak bound |a_p| <= p^{7/64} + p^{-7/64}
Ball kim_sarnak_theta();

enum class SignCase { EvenMinus = 0, EvenPlus = 1, OddPlus = 2, OddMinus = 3 };
SignCase sign_case(int parity, int w);

// the four truncation-tail bounds (upper enclosures)
Ball tail_bound(SignCase cs, long M, long N);

struct SignHypothesisResult {
    std::map<long, int> signs;
    int w = 0;
};

struct SignTrial {
    std::map<long, int> signs;
    int w = 0;
    double abs_lo = 0;  // certified lower bound of |S|
    double abs_hi = 0;
    double bound = 0;   // tail bound
    bool survives = false;
};

struct SignDetection {
    std::optional<SignHypothesisResult> result;  // set only when rigorous
    std::vector<SignTrial> trials;
    double margin = 0;  // min over refuted trials of abs_lo - bound
};

// Test every sign vector for the p | N; a hypothesis survives when its sum
// S = sum_{n <= M} (a_n/sqrt n) W(2 pi n / sqrt N) is consistent with zero
// within the tail bound. Returns a result only if exactly one survives and
// the others are refuted with positive margin.
SignDetection detect_signs(const VerifiedForm& form, long M_trunc);

}  // namespace maass
