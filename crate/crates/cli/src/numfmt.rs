//! Numeric flag parsing: plain digits, `_` separators, and scientific
//! shorthand (`1e8`, `2.5e6`) as long as the value is an exact integer.

pub fn parse_num(s: &str) -> Result<u64, String> {
    let t: String = s.trim().chars().filter(|&c| c != '_').collect();
    if t.is_empty() {
        return Err("empty number".into());
    }
    let Some((mantissa, exp)) = t.split_once(['e', 'E']) else {
        return t.parse::<u64>().map_err(|e| format!("bad number {s:?}: {e}"));
    };
    let exp: u32 = exp
        .parse()
        .map_err(|e| format!("bad exponent in {s:?}: {e}"))?;
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("bad number {s:?}"));
    }
    let scale = exp as i64 - frac_part.len() as i64;
    if scale < 0 {
        return Err(format!("{s:?} is not an integer"));
    }
    let digits: u128 = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|e| format!("bad mantissa in {s:?}: {e}"))?;
    let value = 10u128
        .checked_pow(scale as u32)
        .and_then(|pow| digits.checked_mul(pow))
        .ok_or_else(|| format!("{s:?} overflows"))?;
    u64::try_from(value).map_err(|_| format!("{s:?} does not fit in 64 bits"))
}
