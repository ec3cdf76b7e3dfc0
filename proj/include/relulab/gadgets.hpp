#pragma once

#include "relulab/network.hpp"
#include "relulab/threshold_circuit.hpp"

namespace relulab {

// phi(z) = [2z]_+ - [4z-2]_+ composed j times: 2^{j-1} unit-height triangles
// on [0,1]. j ReLU pair-layers plus an affine readout (depth() = j+1,
// size 2j+1).
Network sawtooth(int j);

// Depth-2 bit extractor: outputs, per coordinate, the c bits of
// bin(trunc(x_i)) (LSB-first, coordinate-major), exact outside the boundary
// strips 2^c x_i in [l+1-delta, l+1]. One shared ReLU pair per boundary
// l = 1..2^c per coordinate (2*2^c ReLUs + c readout rows each).
Network bit_extractor_shallow(unsigned c, const Rational& delta, int d);

// Deep single-input variant: bit of weight 2^{-r} is h_delta(phi^r(x - 2^{-r-1})),
// where h_delta steps from 0 to 1 across [1/2 - delta/2, 1/2 + delta/2].
// Outputs are LSB-first like bin(); branches are equalized to depth c+2 by
// leading ReLUs (phi(z) = phi([z]_+)). Size O(c^2).
Network bit_extractor_deep(unsigned c, const Rational& delta);

// Boundary-strip width the extractors default to.
Rational default_delta(unsigned c);

enum class BoolGadget { And, Nor, Parity, Disj, Ip };

// Exact-on-the-cube ReLU gadgets:
//   And(d)    [sum x - d + 1]_+                       size 1,    depth 1
//   Nor(d)    [1 - sum x]_+                           size 1,    depth 1
//   Parity(d) units [s-l]_+, l = 0..d-1, + readout    size d+1,  depth 2
//   Disj(d)   d AND pairs + NOR output                size d+1,  depth 2
//   Ip(d)     d AND pairs + parity stage              size 2d+1, depth 3
// Disj/Ip take 2d inputs: x in coords 0..d-1, y in coords d..2d-1.
Network boolean_gadget(BoolGadget kind, int d);

// N' = [3N-1]_+ - [3N-2]_+ on a scalar-output network: values <= 1/3 map to
// exactly 0, values >= 2/3 to exactly 1, so exact Boolean networks are
// unchanged on the cube. Merges into a trailing affine readout when there is
// one (+2 rows); otherwise appends the pair and a fresh readout (+3 rows).
Network threshold_output(const Network& net);

// Single affine row mapping c LSB-first bits to sum_j b_j 2^{j-1} / 2^c.
Network binary_decoder(unsigned c);

// Per coordinate, [2x-1/2]_+ - [2x-3/2]_+: maps [0,1/4] to 0 and [3/4,1] to
// 1. 2d ReLUs + d readout rows (the readout merges away under composition).
Network rounding_layer(int d);

// g_net composed with the rounding layer: agrees with the lifted g on the
// corner-cube support, size(g_net) + 2d.
Network agreement_network(const Network& g_net);

// decoder . compiled circuit . extractor. The circuit consumes the
// extractor's c*d coordinate-major bits and emits the c bits the decoder
// reads back; with the default shallow extractor the depth is circuit depth
// + 2 after the affine merges. deep_extractor swaps in d juxtaposed copies
// of the O(c^2)-size variant (depth grows by c, size stops paying the 2^c).
Network benign_approximator(const ThresholdCircuit& tc, unsigned c, int d,
                            const Rational& delta, bool deep_extractor = false);

}  // namespace relulab
