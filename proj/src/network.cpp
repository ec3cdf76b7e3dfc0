#include "relulab/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace relulab {

Activation Activation::relu() {
    Activation a;
    a.kind = ActKind::Relu;
    a.breakpoints = {Rational(0)};
    a.slopes = {Rational(0), Rational(1)};
    a.intercepts = {Rational(0), Rational(0)};
    return a;
}

Activation Activation::sign() {
    Activation a;
    a.kind = ActKind::Sign;
    a.breakpoints = {Rational(0)};
    a.slopes = {Rational(0), Rational(0)};
    a.intercepts = {Rational(0), Rational(1)};
    return a;
}

Activation Activation::pwl(std::vector<Rational> breakpoints,
                           std::vector<Rational> slopes,
                           std::vector<Rational> intercepts) {
    if (breakpoints.empty())
        throw std::invalid_argument("Activation::pwl: need at least one breakpoint");
    if (slopes.size() != breakpoints.size() + 1 || intercepts.size() != slopes.size())
        throw std::invalid_argument("Activation::pwl: k pieces need k-1 breakpoints");
    for (size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i - 1] < breakpoints[i]))
            throw std::invalid_argument("Activation::pwl: breakpoints must be strictly increasing");
    Activation a;
    a.kind = ActKind::Pwl;
    a.breakpoints = std::move(breakpoints);
    a.slopes = std::move(slopes);
    a.intercepts = std::move(intercepts);
    return a;
}

int Activation::piece_of(const Rational& z) const {
    // count of breakpoints strictly below z; left-open/right-closed pieces
    auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), z);
    return static_cast<int>(it - breakpoints.begin());
}

Rational Activation::apply(const Rational& z) const {
    int p = piece_of(z);
    return slopes[p] * z + intercepts[p];
}

bool Activation::operator==(const Activation& o) const {
    return kind == o.kind && breakpoints == o.breakpoints && slopes == o.slopes &&
           intercepts == o.intercepts;
}

Rational AffineForm::eval(const std::vector<Rational>& x) const {
    if (x.size() != coef.size())
        throw std::invalid_argument("AffineForm::eval: dimension mismatch");
    Rational acc = bias;
    for (size_t i = 0; i < coef.size(); ++i)
        if (!coef[i].is_zero() && !x[i].is_zero()) acc += coef[i] * x[i];
    return acc;
}

namespace {

void validate_activation(const Activation& a) {
    if (a.slopes.size() != a.breakpoints.size() + 1 || a.intercepts.size() != a.slopes.size() ||
        a.breakpoints.empty())
        throw std::invalid_argument("Network: malformed activation");
    for (size_t i = 1; i < a.breakpoints.size(); ++i)
        if (!(a.breakpoints[i - 1] < a.breakpoints[i]))
            throw std::invalid_argument("Network: activation breakpoints not increasing");
}

}  // namespace

Network::Network(int input_dim, std::vector<Layer> layers)
    : input_dim_(input_dim), layers_(std::move(layers)) {
    if (input_dim < 0) throw std::invalid_argument("Network: negative input dim");
    if (layers_.empty()) throw std::invalid_argument("Network: no layers");
    int prev = input_dim_;
    for (size_t l = 0; l < layers_.size(); ++l) {
        const Layer& L = layers_[l];
        if (L.rows() == 0) throw std::invalid_argument("Network: empty layer");
        if (L.bias.size() != L.weights.size())
            throw std::invalid_argument("Network: bias/weight row mismatch");
        for (const auto& row : L.weights)
            if (static_cast<int>(row.size()) != prev)
                throw std::invalid_argument("Network: weight column mismatch");
        if (!L.activation && l + 1 != layers_.size())
            throw std::invalid_argument("Network: affine layer allowed only as final readout");
        if (L.activation) validate_activation(*L.activation);
        prev = L.rows();
    }
}

int Network::size() const {
    int s = 0;
    for (const auto& l : layers_) s += l.rows();
    return s;
}

int Network::activated_count() const {
    int s = 0;
    for (const auto& l : layers_)
        if (l.activation) s += l.rows();
    return s;
}

std::vector<Rational> Network::evaluate(const std::vector<Rational>& x) const {
    if (static_cast<int>(x.size()) != input_dim_)
        throw std::invalid_argument("Network::evaluate: input dimension mismatch");
    std::vector<Rational> cur = x;
    std::vector<Rational> next;
    for (const Layer& L : layers_) {
        next.assign(L.rows(), Rational(0));
        for (int j = 0; j < L.rows(); ++j) {
            Rational z = L.bias[j];
            const auto& row = L.weights[j];
            for (size_t k = 0; k < row.size(); ++k)
                if (!row[k].is_zero() && !cur[k].is_zero()) z += row[k] * cur[k];
            next[j] = L.activation ? L.activation->apply(z) : z;
        }
        cur.swap(next);
    }
    return cur;
}

std::vector<Rational> Network::evaluate_bits(const std::vector<int>& bits) const {
    std::vector<Rational> x;
    x.reserve(bits.size());
    for (int b : bits) {
        if (b != 0 && b != 1) throw std::invalid_argument("Network::evaluate_bits: bits must be 0/1");
        x.emplace_back(b);
    }
    return evaluate(x);
}

ActivationPattern Network::activation_pattern(const std::vector<Rational>& x) const {
    if (static_cast<int>(x.size()) != input_dim_)
        throw std::invalid_argument("Network::activation_pattern: input dimension mismatch");
    ActivationPattern pat;
    pat.pieces.reserve(activated_count());
    std::vector<Rational> cur = x;
    std::vector<Rational> next;
    for (const Layer& L : layers_) {
        next.assign(L.rows(), Rational(0));
        for (int j = 0; j < L.rows(); ++j) {
            Rational z = L.bias[j];
            const auto& row = L.weights[j];
            for (size_t k = 0; k < row.size(); ++k)
                if (!row[k].is_zero() && !cur[k].is_zero()) z += row[k] * cur[k];
            if (L.activation) {
                int p = L.activation->piece_of(z);
                pat.pieces.push_back(p);
                next[j] = L.activation->slopes[p] * z + L.activation->intercepts[p];
            } else {
                next[j] = z;
            }
        }
        cur.swap(next);
    }
    return pat;
}

std::vector<AffineForm> Network::collapse_to_affine(const ActivationPattern& pattern) const {
    if (static_cast<int>(pattern.pieces.size()) != activated_count())
        throw std::invalid_argument("Network::collapse_to_affine: pattern length mismatch");
    CollapseWalker w(*this);
    size_t next = 0;
    while (!w.done()) {
        if (w.activation()) {
            int p = pattern.pieces[next++];
            if (p < 0 || p >= w.activation()->piece_count())
                throw std::invalid_argument("Network::collapse_to_affine: piece out of range");
            w.resolve(p);
        } else {
            w.resolve(0);
        }
    }
    return w.outputs();
}

BigInt Network::denominator_lcm() const {
    // A collapsed pre-activation multiplies at most one weight and one
    // activation slope per layer, so the product over layers of
    // lcm(weight/bias dens) * lcm(activation-parameter dens) clears every
    // collapsed coefficient, bias and breakpoint regardless of the pattern.
    // (The two lcms stay separate: a weight den and a slope den may share
    // factors yet still both divide the same path product.)
    BigInt prod = 1;
    for (const Layer& L : layers_) {
        BigInt lw = 1, ls = 1;
        auto fold = [](BigInt& l, const Rational& r) {
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.den().get_mpz_t());
        };
        for (const auto& row : L.weights)
            for (const auto& w : row) fold(lw, w);
        for (const auto& b : L.bias) fold(lw, b);
        if (L.activation) {
            for (const auto& c : L.activation->breakpoints) fold(ls, c);
            for (const auto& s : L.activation->slopes) fold(ls, s);
            for (const auto& t : L.activation->intercepts) fold(ls, t);
        }
        prod *= lw * ls;
    }
    return prod;
}

Rational Network::preactivation_bound() const {
    // Interval/L1 propagation: per neuron output we carry (coef L1, |bias|)
    // bounds valid for any piece resolution; inputs range over [-1,1].
    std::vector<std::pair<Rational, Rational>> out(input_dim_, {Rational(1), Rational(0)});
    Rational best(0);
    for (const Layer& L : layers_) {
        std::vector<std::pair<Rational, Rational>> next(L.rows());
        for (int j = 0; j < L.rows(); ++j) {
            Rational c1(0), b1 = L.bias[j].abs();
            const auto& row = L.weights[j];
            for (size_t k = 0; k < row.size(); ++k) {
                if (row[k].is_zero()) continue;
                Rational a = row[k].abs();
                c1 += a * out[k].first;
                b1 += a * out[k].second;
            }
            Rational pre_bound = c1 + b1;
            if (pre_bound > best) best = pre_bound;
            if (L.activation) {
                Rational smax(0), bmax(0);
                for (int p = 0; p < L.activation->piece_count(); ++p) {
                    Rational s = L.activation->slopes[p].abs();
                    Rational t = s * b1 + L.activation->intercepts[p].abs();
                    if (s > smax) smax = s;
                    if (t > bmax) bmax = t;
                }
                next[j] = {smax * c1, bmax};
            } else {
                next[j] = {c1, b1};
            }
        }
        out.swap(next);
    }
    return best;
}

// ---------------------------------------------------------------------------

CollapseWalker::CollapseWalker(const Network& net) : net_(net) {
    prev_.reserve(net.input_dim());
    for (int i = 0; i < net.input_dim(); ++i) {
        AffineForm f;
        f.coef.assign(net.input_dim(), Rational(0));
        f.coef[i] = Rational(1);
        prev_.push_back(std::move(f));
    }
    enter_layer();
}

void CollapseWalker::enter_layer() {
    const Layer& L = net_.layers()[layer_];
    pre_.clear();
    pre_.reserve(L.rows());
    for (int j = 0; j < L.rows(); ++j) {
        AffineForm f;
        f.coef.assign(net_.input_dim(), Rational(0));
        f.bias = L.bias[j];
        const auto& row = L.weights[j];
        for (size_t k = 0; k < row.size(); ++k) {
            if (row[k].is_zero()) continue;
            const AffineForm& g = prev_[k];
            for (int i = 0; i < net_.input_dim(); ++i)
                if (!g.coef[i].is_zero()) f.coef[i] += row[k] * g.coef[i];
            f.bias += row[k] * g.bias;
        }
        pre_.push_back(std::move(f));
    }
    row_ = 0;
    resolved_.clear();
}

bool CollapseWalker::done() const { return layer_ >= net_.depth(); }

const AffineForm& CollapseWalker::pre_affine() const {
    if (done()) throw std::logic_error("CollapseWalker: past the end");
    return pre_[row_];
}

const std::optional<Activation>& CollapseWalker::activation() const {
    return net_.layers()[layer_].activation;
}

void CollapseWalker::resolve(int piece) {
    if (done()) throw std::logic_error("CollapseWalker: past the end");
    const auto& act = net_.layers()[layer_].activation;
    AffineForm out = pre_[row_];
    if (act) {
        if (piece < 0 || piece >= act->piece_count())
            throw std::invalid_argument("CollapseWalker::resolve: piece out of range");
        const Rational& s = act->slopes[piece];
        for (auto& c : out.coef) c *= s;
        out.bias = s * out.bias + act->intercepts[piece];
    }
    resolved_.push_back(std::move(out));
    if (++row_ == net_.layers()[layer_].rows()) {
        prev_ = std::move(resolved_);
        resolved_.clear();
        ++layer_;
        if (!done()) enter_layer();
    }
}

const std::vector<AffineForm>& CollapseWalker::outputs() const {
    if (!done()) throw std::logic_error("CollapseWalker: not finished");
    return prev_;
}

// ---------------------------------------------------------------------------

Network compose(const Network& outer, const Network& inner) {
    if (inner.output_dim() != outer.input_dim())
        throw std::invalid_argument("compose: inner output dim != outer input dim");
    std::vector<Layer> layers(inner.layers().begin(), inner.layers().end());
    if (!layers.back().activation) {
        // merge the affine readout into outer's first layer
        Layer tail = std::move(layers.back());
        layers.pop_back();
        const Layer& head = outer.layers().front();
        Layer merged;
        merged.activation = head.activation;
        merged.weights.assign(head.rows(), std::vector<Rational>(tail.cols(), Rational(0)));
        merged.bias.assign(head.rows(), Rational(0));
        for (int j = 0; j < head.rows(); ++j) {
            Rational b = head.bias[j];
            for (int k = 0; k < tail.rows(); ++k) {
                const Rational& w = head.weights[j][k];
                if (w.is_zero()) continue;
                for (int i = 0; i < tail.cols(); ++i)
                    if (!tail.weights[k][i].is_zero())
                        merged.weights[j][i] += w * tail.weights[k][i];
                b += w * tail.bias[k];
            }
            merged.bias[j] = b;
        }
        layers.push_back(std::move(merged));
        layers.insert(layers.end(), outer.layers().begin() + 1, outer.layers().end());
    } else {
        layers.insert(layers.end(), outer.layers().begin(), outer.layers().end());
    }
    return Network(inner.input_dim(), std::move(layers));
}

Network juxtapose(const std::vector<Network>& blocks) {
    if (blocks.empty()) throw std::invalid_argument("juxtapose: no blocks");
    int depth = blocks[0].depth();
    for (const auto& b : blocks)
        if (b.depth() != depth)
            throw std::invalid_argument(
                "juxtapose: blocks must have equal depth (padding unsupported)");
    int input_dim = 0;
    for (const auto& b : blocks) input_dim += b.input_dim();
    std::vector<Layer> layers;
    layers.reserve(depth);
    for (int l = 0; l < depth; ++l) {
        const auto& ref = blocks[0].layers()[l].activation;
        for (const auto& b : blocks) {
            const auto& act = b.layers()[l].activation;
            if (ref.has_value() != act.has_value() || (ref && !(*ref == *act)))
                throw std::invalid_argument("juxtapose: mismatched activations at equal depth");
        }
        int rows = 0, cols = 0;
        for (const auto& b : blocks) {
            rows += b.layers()[l].rows();
            cols += b.layers()[l].cols();
        }
        Layer L;
        L.activation = ref;
        L.weights.assign(rows, std::vector<Rational>(cols, Rational(0)));
        L.bias.assign(rows, Rational(0));
        int r0 = 0, c0 = 0;
        for (const auto& b : blocks) {
            const Layer& src = b.layers()[l];
            for (int j = 0; j < src.rows(); ++j) {
                for (int i = 0; i < src.cols(); ++i) L.weights[r0 + j][c0 + i] = src.weights[j][i];
                L.bias[r0 + j] = src.bias[j];
            }
            r0 += src.rows();
            c0 += src.cols();
        }
        layers.push_back(std::move(L));
    }
    return Network(input_dim, std::move(layers));
}

}  // namespace relulab
