#pragma once

namespace flans {

/// Per-time diagnostics of a solution snapshot.
struct DiagRecord {
  double t = 0.0;
  double E0 = 0.0;      // ||u||^2
  double E1 = 0.0;      // ||u||^2 + alpha^2 ||A^{1/2} u||^2
  double D = 0.0;       // ||A^{s/2} u||^2 + alpha^2 ||A^{(1+s)/2} u||^2
  double nDA = 0.0;     // ||u||_{D(A)}
  double n1ps2 = 0.0;   // ||A^{1+s/2} u||
  double cancel = 0.0;  // |<(1 + alpha^2 A) u, f(u,u)>| / (||u||_{D(A)}^3 + tiny)
};

}  // namespace flans
