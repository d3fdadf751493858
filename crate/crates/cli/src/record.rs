//! Plain-text and CSV rendering of result records and sweep tables.

use std::fmt::Write as _;

/// Formats `x` with 10 significant digits. Values between 1e-4 and 1e10
/// use positional notation, everything else scientific notation.
/// Non-finite input renders as an empty cell.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return String::new();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..10).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.9e}");
        let (mantissa, e) = s
            .split_once('e')
            .expect("scientific format has an exponent");
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(u64),
    Text(String),
    Absent,
}

impl Field {
    pub fn opt(x: Option<f64>) -> Self {
        x.map_or(Field::Absent, Field::Num)
    }

    fn render(&self) -> Option<String> {
        match self {
            Field::Num(x) if x.is_finite() => Some(format_sig(*x)),
            Field::Num(_) | Field::Absent => None,
            Field::Int(n) => Some(n.to_string()),
            Field::Text(s) => Some(s.clone()),
        }
    }
}

/// Ordered named fields, printed as `key = value` lines or one CSV row.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    pub fields: Vec<(&'static str, Field)>,
}

impl Record {
    pub fn push(&mut self, key: &'static str, value: Field) -> &mut Self {
        self.fields.push((key, value));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.fields.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    /// Absent fields are omitted.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.fields {
            if let Some(v) = v.render() {
                let _ = writeln!(s, "{k} = {v}");
            }
        }
        s
    }

    /// Header plus one row; absent fields are empty cells.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.fields.iter().map(|(k, _)| *k))
            .and_then(|_| {
                w.write_record(
                    self.fields
                        .iter()
                        .map(|(_, v)| v.render().unwrap_or_default()),
                )
            })
            .expect("writing to memory cannot fail");
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
    }
}
