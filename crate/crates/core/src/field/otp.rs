//! Additive one-time pad over F_d.

use super::FieldElement;

#[inline]
pub fn otp_encrypt(message: FieldElement, key: FieldElement) -> FieldElement {
    message + key
}

#[inline]
pub fn otp_decrypt(cipher: FieldElement, key: FieldElement) -> FieldElement {
    cipher - key
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::rng::seeded;

    #[test]
    fn examples() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(otp_encrypt(f.elem(2), f.elem(3)).value(), 0);
        assert_eq!(otp_decrypt(f.elem(0), f.elem(3)).value(), 2);
        assert_eq!(otp_encrypt(f.zero(), f.zero()).value(), 0);
    }

    #[test]
    fn round_trip_exhaustive_d5() {
        let f = PrimeField::new(5).unwrap();
        for m in f.elements() {
            for k in f.elements() {
                assert_eq!(otp_decrypt(otp_encrypt(m, k), k), m);
            }
        }
    }

    #[test]
    fn ciphertext_uniform_for_fixed_message() {
        // chi-square with d - 1 = 6 degrees of freedom; 22.458 is the 0.999 quantile
        let f = PrimeField::new(7).unwrap();
        let mut rng = seeded(5);
        let trials = 14_000;
        let mut counts = [0u32; 7];
        for _ in 0..trials {
            let c = otp_encrypt(f.elem(3), f.random(&mut rng));
            counts[c.value() as usize] += 1;
        }
        let expected = trials as f64 / 7.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        assert!(chi2 < 22.458, "chi2 = {chi2}");
    }
}
