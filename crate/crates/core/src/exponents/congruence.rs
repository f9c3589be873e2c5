//! Linear congruences `a·t ≡ b (mod p)` and their intersection.

use num_integer::Integer;

/// The solution set `t ≡ residue (mod modulus)`, with `0 ≤ residue < modulus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Congruence {
    pub residue: u64,
    pub modulus: u64,
}

impl Congruence {
    /// Every integer.
    pub const ANY: Congruence = Congruence {
        residue: 0,
        modulus: 1,
    };

    /// Solves `coef·t ≡ rhs (mod p)`; `None` when unsolvable.
    pub fn solve(coef: u64, rhs: u64, p: u64) -> Option<Congruence> {
        let (coef, rhs) = ((coef % p) as i128, (rhs % p) as i128);
        let p = p as i128;
        let g = coef.gcd(&p);
        if rhs % g != 0 {
            return None;
        }
        let modulus = p / g;
        let inv = mod_inverse(coef / g, modulus)?;
        let residue = (rhs / g % modulus) * inv % modulus;
        Some(Congruence {
            residue: residue as u64,
            modulus: modulus as u64,
        })
    }

    /// Intersection of two residue classes (CRT for arbitrary moduli).
    pub fn intersect(self, other: Congruence) -> Option<Congruence> {
        let (r1, m1) = (self.residue as i128, self.modulus as i128);
        let (r2, m2) = (other.residue as i128, other.modulus as i128);
        let g = m1.gcd(&m2);
        if (r2 - r1) % g != 0 {
            return None;
        }
        let lcm = m1 / g * m2;
        // r1 + m1·k ≡ r2 (mod m2)  ⇒  k ≡ (r2 - r1)/g · (m1/g)^{-1} (mod m2/g)
        let m2g = m2 / g;
        let k = if m2g == 1 {
            0
        } else {
            let inv = mod_inverse((m1 / g).rem_euclid(m2g), m2g)?;
            ((r2 - r1) / g).rem_euclid(m2g) * inv % m2g
        };
        let residue = (r1 + m1 * k).rem_euclid(lcm);
        Some(Congruence {
            residue: u64::try_from(residue).ok()?,
            modulus: u64::try_from(lcm).ok()?,
        })
    }
}

fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    if m == 1 {
        return Some(0);
    }
    let e = a.rem_euclid(m).extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_matches_brute_force() {
        for p in 1..=12u64 {
            for coef in 0..p {
                for rhs in 0..p {
                    let brute: Vec<u64> = (0..p).filter(|t| (coef * t) % p == rhs).collect();
                    match Congruence::solve(coef, rhs, p) {
                        None => assert!(brute.is_empty(), "{coef}t≡{rhs} mod {p}"),
                        Some(c) => {
                            let expect: Vec<u64> =
                                (0..p).filter(|t| t % c.modulus == c.residue).collect();
                            assert_eq!(brute, expect, "{coef}t≡{rhs} mod {p}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn intersect_matches_brute_force() {
        for m1 in 1..=9u64 {
            for m2 in 1..=9u64 {
                for r1 in 0..m1 {
                    for r2 in 0..m2 {
                        let a = Congruence { residue: r1, modulus: m1 };
                        let b = Congruence { residue: r2, modulus: m2 };
                        let range = m1 * m2;
                        let brute: Vec<u64> =
                            (0..range).filter(|t| t % m1 == r1 && t % m2 == r2).collect();
                        match a.intersect(b) {
                            None => assert!(brute.is_empty()),
                            Some(c) => {
                                let expect: Vec<u64> =
                                    (0..range).filter(|t| t % c.modulus == c.residue).collect();
                                assert_eq!(brute, expect);
                            }
                        }
                    }
                }
            }
        }
    }
}
