use std::fmt;

/// A decoded element of a catalog carrier.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    /// A plain element of `X` (identity, or the left summand of an exception).
    Pure(usize),
    Raise(usize),
    /// `s ↦ x_s`.
    Reader(Vec<usize>),
    /// `s ↦ (x_s, s'_s)`.
    State(Vec<(usize, usize)>),
    /// Sorted members of a subset.
    Set(Vec<usize>),
    /// Answer for each continuation `h ∈ A^X`, indexed by its encoding.
    Cont(Vec<usize>),
    /// `s ↦ Some((x, s'))` or `None` for the error.
    StateExc(Vec<Option<(usize, usize)>>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Pure(x) => write!(f, "{x}"),
            Value::Raise(e) => write!(f, "raise {e}"),
            Value::Reader(g) => {
                f.write_str("λs.[")?;
                join(f, g.iter().map(|x| x.to_string()))?;
                f.write_str("]")
            }
            Value::State(g) => {
                f.write_str("λs.[")?;
                join(f, g.iter().map(|(x, s)| format!("({x},{s})")))?;
                f.write_str("]")
            }
            Value::Set(items) => {
                f.write_str("{")?;
                join(f, items.iter().map(|x| x.to_string()))?;
                f.write_str("}")
            }
            Value::Cont(t) => {
                f.write_str("λk.[")?;
                join(f, t.iter().map(|a| a.to_string()))?;
                f.write_str("]")
            }
            Value::StateExc(g) => {
                f.write_str("λs.[")?;
                join(
                    f,
                    g.iter().map(|cell| match cell {
                        Some((x, s)) => format!("({x},{s})"),
                        None => "err".to_string(),
                    }),
                )?;
                f.write_str("]")
            }
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, items: impl Iterator<Item = String>) -> fmt::Result {
    for (i, item) in items.enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        f.write_str(&item)?;
    }
    Ok(())
}
