use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;

pub(crate) fn rat(n: i128, d: i128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn int(n: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Decimal rendering rounded half away from zero to `digits` places.
pub fn round_half_up(r: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = r.abs() * BigRational::from_integer(scale.clone());
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let units = (scaled + half).floor().to_integer();
    let (whole, frac) = units.div_rem(&scale);
    let sign = if r.is_negative() && units.sign() == num_bigint::Sign::Plus { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{whole}");
    }
    format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = digits as usize)
}

/// Serde adapter writing a rational as `"num/den"` (or `"num"`).
pub(crate) mod ratio_str {
    use num_rational::BigRational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(|_| de::Error::custom(format!("bad rational {s:?}")))
    }
}
