use std::sync::Arc;

use crate::error::{Error, Result};
use crate::modular::{ipow, is_odd_prime};
use crate::scalars::{Cyclotomic, CyclotomicField};

/// Shared context: the prime, the cyclotomic field of conductor 4·p^E and the
/// multiplier m of the additive character x ↦ ζ_p^{m x} of F_p.
#[derive(Clone, Debug)]
pub struct Session {
    p: u64,
    max_exp: u32,
    psi: u64,
    field: Arc<CyclotomicField>,
}

impl Session {
    pub fn new(p: u64, max_exp: u32) -> Result<Self> {
        Self::with_psi(p, max_exp, 1)
    }

    pub fn with_psi(p: u64, max_exp: u32, psi: u64) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::Input(format!("{p} is not an odd prime")));
        }
        if psi % p == 0 {
            return Err(Error::Input("character multiplier must be a unit".into()));
        }
        let max_exp = max_exp.max(1);
        let field = CyclotomicField::new(4 * ipow(p, max_exp));
        Ok(Session {
            p,
            max_exp,
            psi: psi % p,
            field,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn max_exp(&self) -> u32 {
        self.max_exp
    }

    pub fn psi(&self) -> u64 {
        self.psi
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn conductor(&self) -> u64 {
        self.field.conductor()
    }

    pub fn one(&self) -> Cyclotomic {
        Cyclotomic::one(&self.field)
    }

    pub fn zero(&self) -> Cyclotomic {
        Cyclotomic::zero(&self.field)
    }

    pub fn int(&self, n: i128) -> Cyclotomic {
        Cyclotomic::from_int(&self.field, n)
    }

    /// ζ_{p^e}^k.
    pub fn root(&self, e: u32, k: u64) -> Cyclotomic {
        let n = self.conductor();
        let order = ipow(self.p, e);
        Cyclotomic::root(&self.field, (n / order) * (k % order))
    }

    /// ζ_4^k.
    pub fn i_pow(&self, k: u64) -> Cyclotomic {
        Cyclotomic::root(&self.field, self.conductor() / 4 * (k % 4))
    }

    pub fn sqrt_p(&self) -> Cyclotomic {
        Cyclotomic::sqrt_p(&self.field, self.p).expect("conductor divisible by 4p")
    }

    /// 1/√(p^k).
    pub fn inv_sqrt_p_pow(&self, k: u32) -> Cyclotomic {
        let half = k.div_ceil(2);
        let base = if k % 2 == 1 { self.sqrt_p() } else { self.one() };
        base.div_rational(ipow(self.p, half) as i128)
            .expect("nonzero")
    }
}
