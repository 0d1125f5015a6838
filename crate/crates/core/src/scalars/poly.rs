//! Integer cyclotomic polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

type Memo = Mutex<HashMap<u32, Arc<Vec<BigInt>>>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Euler's totient.
pub fn euler_phi(m: u32) -> u32 {
    assert!(m >= 1, "totient of zero");
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub(crate) fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// The `m`-th cyclotomic polynomial, coefficients from the constant term up.
///
/// Results are memoized; the table is shared across threads.
pub fn cyclotomic_polynomial(m: u32) -> Arc<Vec<BigInt>> {
    assert!(m >= 1, "cyclotomic polynomial of order zero");
    if let Some(p) = memo().lock().expect("memo poisoned").get(&m) {
        return Arc::clone(p);
    }
    // x^m - 1 divided by every proper divisor's cyclotomic factor.
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            num = divide_monic(&num, &phi_d);
        }
    }
    let result = Arc::new(num);
    memo()
        .lock()
        .expect("memo poisoned")
        .insert(m, Arc::clone(&result));
    result
}

/// Exact quotient of `num` by the monic `den`; the remainder must vanish.
fn divide_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    if rem.len() <= dn {
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (t, d) in den.iter().enumerate() {
            rem[i + t] -= &c * d;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}
