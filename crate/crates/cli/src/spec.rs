use std::path::Path;

use boxlab::group::FiniteGroupTable;

use crate::error::CliError;

/// Largest `n` accepted for `symmetric:n` and `alternating:n`.
pub const MAX_PERMUTATION_DEGREE: usize = 7;
/// Largest order of a group built from a spec.
pub const MAX_TABLE_ORDER: usize = 5040;

/// Parses a group spec: `cyclic:n`, `dihedral:n`, `quaternion`,
/// `symmetric:n`, `alternating:n`, `elementary:r`, `file:path`, or a
/// `*`-separated direct product of these.
pub fn parse_group(spec: &str) -> Result<FiniteGroupTable, CliError> {
    let mut parts = spec.split('*').map(str::trim);
    let first = parse_single(parts.next().unwrap_or(""), spec)?;
    parts.try_fold(first, |acc, p| {
        let next = parse_single(p, spec)?;
        if acc.order() * next.order() > MAX_TABLE_ORDER {
            return Err(CliError::Spec {
                spec: spec.to_string(),
                message: format!("product order {} exceeds {MAX_TABLE_ORDER}", acc.order() * next.order()),
            });
        }
        Ok(FiniteGroupTable::direct_product(&acc, &next))
    })
}

fn parse_single(part: &str, whole: &str) -> Result<FiniteGroupTable, CliError> {
    let err = |message: String| CliError::Spec { spec: whole.to_string(), message };
    let (kind, arg) = match part.split_once(':') {
        Some((k, a)) => (k.trim(), Some(a.trim())),
        None => (part, None),
    };
    let number = |min: usize, max: usize| -> Result<usize, CliError> {
        let raw = arg.ok_or_else(|| err(format!("{kind} needs a parameter")))?;
        let n: usize = raw.parse().map_err(|_| err(format!("{raw:?} is not a number")))?;
        if n < min || n > max {
            return Err(err(format!("{kind} parameter must be in {min}..={max}, got {n}")));
        }
        Ok(n)
    };
    match kind {
        "cyclic" => Ok(FiniteGroupTable::cyclic(number(1, MAX_TABLE_ORDER)?)),
        "dihedral" => Ok(FiniteGroupTable::dihedral(number(1, MAX_TABLE_ORDER / 2)?)),
        "quaternion" => Ok(FiniteGroupTable::quaternion()),
        "symmetric" => Ok(FiniteGroupTable::symmetric(number(1, MAX_PERMUTATION_DEGREE)?)),
        "alternating" => Ok(FiniteGroupTable::alternating(number(1, MAX_PERMUTATION_DEGREE)?)),
        "elementary" => Ok(FiniteGroupTable::elementary_abelian_2(number(0, 12)?)),
        "file" => {
            let path = Path::new(arg.ok_or_else(|| err("file needs a path".into()))?);
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            Ok(FiniteGroupTable::parse(&text)?)
        }
        _ => Err(err(format!("unknown group kind {kind:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs() {
        assert_eq!(parse_group("cyclic:6").unwrap().order(), 6);
        assert_eq!(parse_group("dihedral:4").unwrap().order(), 8);
        assert_eq!(parse_group("quaternion").unwrap().order(), 8);
        assert_eq!(parse_group("symmetric:4").unwrap().order(), 24);
        assert_eq!(parse_group("alternating:4").unwrap().order(), 12);
        assert_eq!(parse_group("cyclic:2*cyclic:3*quaternion").unwrap().order(), 48);
        assert!(parse_group("cyclic").is_err());
        assert!(parse_group("cyclic:x").is_err());
        assert!(parse_group("symmetric:12").is_err());
        assert!(parse_group("cyclic:100*cyclic:100").is_err());
        assert!(parse_group("lie:3").is_err());
        assert!(parse_group("file:/nonexistent/table.txt").is_err());
    }
}
