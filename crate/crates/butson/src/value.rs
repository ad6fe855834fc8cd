//! Numeric values tagged with their provenance: exact integer or float.

use serde::Serialize;

/// A reported quantity that is either an exact integer (weight tables for
/// `q ∈ {1,2,3,4,6}`, integral norms) or a double computed from the complex
/// embedding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scalar {
    /// Exact integer result.
    Exact(i64),
    /// Floating-point result, correct to well below any tolerance used here.
    Approx(f64),
}

impl Scalar {
    /// Numeric value, exact integers widened to f64.
    pub fn value(&self) -> f64 {
        match *self {
            Scalar::Exact(v) => v as f64,
            Scalar::Approx(v) => v,
        }
    }

    /// Whether the value is exact.
    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    /// Exact value if available.
    pub fn as_exact(&self) -> Option<i64> {
        match *self {
            Scalar::Exact(v) => Some(v),
            Scalar::Approx(_) => None,
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.value().partial_cmp(&other.value())
    }
}

impl std::fmt::Display for Scalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Scalar::Exact(v) => write!(f, "{v}"),
            Scalar::Approx(v) => write!(f, "{v:.6}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = ser.serialize_struct("Scalar", 2)?;
        match *self {
            Scalar::Exact(v) => {
                s.serialize_field("value", &v)?;
                s.serialize_field("exact", &true)?;
            }
            Scalar::Approx(v) => {
                s.serialize_field("value", &v)?;
                s.serialize_field("exact", &false)?;
            }
        }
        s.end()
    }
}

/// Sort a list of scalars ascending by numeric value and merge duplicates.
/// Exact values are deduplicated exactly; approximate values closer than
/// `tol` are considered the same.
pub(crate) fn sort_dedup(mut values: Vec<Scalar>, tol: f64) -> Vec<Scalar> {
    values.sort_by(|a, b| a.value().total_cmp(&b.value()));
    let mut out: Vec<Scalar> = Vec::with_capacity(values.len());
    for v in values {
        match (out.last(), v) {
            (Some(Scalar::Exact(a)), Scalar::Exact(b)) if *a == b => {}
            (Some(last), Scalar::Approx(b)) if (last.value() - b).abs() <= tol => {}
            (Some(Scalar::Approx(a)), Scalar::Exact(b)) if (a - b as f64).abs() <= tol => {
                // prefer the exact representative
                *out.last_mut().unwrap() = v;
            }
            _ => out.push(v),
        }
    }
    out
}
