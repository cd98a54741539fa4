#pragma once

#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

// Constant-product pool A*B = L^2 between the stable asset (reserve_a) and
// its collateral (reserve_b). Templated on the arithmetic type: double for
// simulation speed, boost cpp_rational as the exact oracle in tests.

namespace pegsim::amm {

using Rational = boost::multiprecision::cpp_rational;

enum class Side {
    CollateralIn,  // deposit b, withdraw a
    StableIn,      // deposit a, withdraw b
};

template <typename Real>
struct SwapResult {
    Real amount_out;
    Real effective_price;  // of the stable asset, in collateral units
    Real price_impact;     // p_e - p_s = delta_in / opposite reserve
};

template <typename Real>
class PoolT {
  public:
    PoolT(Real reserve_a, Real reserve_b, int fee_bps = 0,
          std::string chain_id = {})
        : a_(reserve_a), b_(reserve_b), fee_bps_(fee_bps),
          chain_id_(std::move(chain_id)) {
        if (!(a_ > 0 && b_ > 0))
            throw std::invalid_argument("pool: reserves must be positive");
        if (fee_bps_ < 0 || fee_bps_ >= 10000)
            throw std::invalid_argument("pool: bad fee");
    }

    const Real& reserve_a() const { return a_; }
    const Real& reserve_b() const { return b_; }
    int fee_bps() const { return fee_bps_; }
    const std::string& chain_id() const { return chain_id_; }

    /// p_s = B / A.
    Real spot_price() const { return b_ / a_; }

    Real invariant() const { return a_ * b_; }

    /// delta_a = A * delta_b_net / (B + delta_b_net) after the fee haircut.
    Real quote_out(Real delta_b) const {
        require_positive(delta_b);
        Real net = apply_fee(delta_b);
        return a_ * net / (b_ + net);
    }

    /// Reverse-direction quote: stable in, collateral out.
    Real quote_out_stable_in(Real delta_a) const {
        require_positive(delta_a);
        Real net = apply_fee(delta_a);
        return b_ * net / (a_ + net);
    }

    /// PI = p_e - p_s = delta_b / A (fee-free identity).
    Real price_impact(Real delta_b) const {
        require_positive(delta_b);
        return delta_b / a_;
    }

    SwapResult<Real> execute_swap(Real delta_b) {
        Real out = quote_out(delta_b);
        if (!(out < a_))
            throw std::invalid_argument("pool: trade would empty reserve_a");
        Real p_s = spot_price();
        a_ -= out;
        b_ += delta_b;  // fee stays in reserve_b
        Real p_e = delta_b / out;
        return {out, p_e, p_e - p_s};
    }

    SwapResult<Real> execute_swap_stable_in(Real delta_a) {
        Real out = quote_out_stable_in(delta_a);
        if (!(out < b_))
            throw std::invalid_argument("pool: trade would empty reserve_b");
        Real p_s = spot_price();
        b_ -= out;
        a_ += delta_a;
        Real p_e = out / delta_a;  // collateral received per stable unit
        return {out, p_e, p_s - p_e};
    }

    /// Scale both reserves, keeping the spot price; models liquidity
    /// provision/withdrawal.
    void scale_liquidity(Real factor) {
        if (!(factor > 0))
            throw std::invalid_argument("pool: bad liquidity factor");
        a_ *= factor;
        b_ *= factor;
    }

  private:
    static void require_positive(const Real& v) {
        if (!(v > 0)) throw std::invalid_argument("pool: trade size must be > 0");
    }
    Real apply_fee(const Real& v) const {
        if (fee_bps_ == 0) return v;
        return v * Real(10000 - fee_bps_) / Real(10000);
    }

    Real a_, b_;
    int fee_bps_;
    std::string chain_id_;
};

using Pool = PoolT<double>;
using RationalPool = PoolT<Rational>;

}  // namespace pegsim::amm
