#pragma once

namespace kerrlab::modewave {

// r* = r + 2M ln(r/2M - 1) on r > 2M; r* = r when M = 0.
double tortoise(double r, double mass);

// Inverse of tortoise for any real r*, by Newton in u = ln(r/2M - 1).
double r_of_rstar(double rstar, double mass);

// dr/dr* = 1 - 2M/r
double tortoise_jacobian(double r, double mass);

}  // namespace kerrlab::modewave
