//! Text encodings of tower elements.
//!
//! Term form writes every coordinate: `2+1u` in `F_25`, `1+2w` in `F_9`,
//! `(1+2w)+(0+1w)u` in `F_81 ⊃ F_9`. Bracket form nests coordinate lists:
//! `[2,1]`, `[[1,2],[0,1]]`. Parsing accepts both, plus omitted terms,
//! implicit unit coefficients (`u`), `*`, `^k` and `-`.

use super::{Elem, FieldTower, Level};
use crate::error::{Error, Result};

fn lower(level: Level) -> Level {
    match level {
        Level::Top => Level::Mid,
        _ => Level::Prime,
    }
}

fn symbol(level: Level) -> Option<char> {
    match level {
        Level::Top => Some('u'),
        Level::Mid => Some('w'),
        Level::Prime => None,
    }
}

/// Whether `level` is written with its own variable, i.e. it is a proper
/// extension of the level below.
fn has_variable(t: &FieldTower, level: Level) -> bool {
    level != Level::Prime && t.level_degree(level) > 1
}

pub(super) fn format(t: &FieldTower, e: Elem) -> String {
    if !has_variable(t, e.level) {
        return match e.level {
            Level::Top if t.m() > 1 => format(t, Elem::new(Level::Mid, e.value)),
            _ => e.value.to_string(),
        };
    }
    let sym = symbol(e.level).unwrap();
    let sub = lower(e.level);
    let wrap = has_variable(t, sub);
    t.coords(e.level, e.value)
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let coef = format(t, Elem::new(sub, c));
            let coef = if wrap { format!("({coef})") } else { coef };
            match i {
                0 => coef,
                1 => format!("{coef}{sym}"),
                _ => format!("{coef}{sym}^{i}"),
            }
        })
        .collect::<Vec<_>>()
        .join("+")
}

pub(super) fn format_bracket(t: &FieldTower, e: Elem) -> String {
    if !has_variable(t, e.level) {
        return match e.level {
            Level::Top if t.m() > 1 => format_bracket(t, Elem::new(Level::Mid, e.value)),
            _ => e.value.to_string(),
        };
    }
    let sub = lower(e.level);
    let inner: Vec<String> = t
        .coords(e.level, e.value)
        .iter()
        .map(|&c| format_bracket(t, Elem::new(sub, c)))
        .collect();
    format!("[{}]", inner.join(","))
}

pub(super) fn parse(t: &FieldTower, level: Level, s: &str) -> Result<Elem> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty element".into()));
    }
    if s.starts_with('[') {
        return parse_bracket(t, level, &s);
    }
    if !has_variable(t, level) {
        return match level {
            Level::Top | Level::Mid if t.m() > 1 => {
                parse(t, Level::Mid, &s).map(|e| Elem::new(level, e.value))
            }
            _ => parse_int(t, &s).map(|v| Elem::new(level, v)),
        };
    }
    parse_terms(t, level, &s)
}

fn parse_int(t: &FieldTower, s: &str) -> Result<u32> {
    let n: i64 = s
        .parse()
        .map_err(|_| Error::Parse(format!("not an integer: {s:?}")))?;
    Ok(t.prime().from_int(n))
}

fn parse_bracket(t: &FieldTower, level: Level, s: &str) -> Result<Elem> {
    let inner = s
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("unbalanced brackets in {s:?}")))?;
    let parts = split_top_level(inner, &[',']);
    if !has_variable(t, level) {
        if level == Level::Top && t.m() > 1 {
            return parse_bracket(t, Level::Mid, s).map(|e| Elem::new(level, e.value));
        }
        return Err(Error::Parse(format!(
            "unexpected list for a {level:?} element"
        )));
    }
    let sub = lower(level);
    let coords = parts
        .iter()
        .map(|(_, p)| parse(t, sub, p).map(|e| e.value))
        .collect::<Result<Vec<_>>>()?;
    t.from_coords(level, &coords)
        .map_err(|e| Error::Parse(e.to_string()))
}

/// Splits at depth-0 separators. Each piece carries the separator that
/// preceded it (or `None` for the first).
fn split_top_level<'a>(s: &'a str, seps: &[char]) -> Vec<(Option<char>, &'a str)> {
    let mut out = Vec::new();
    let (mut depth, mut start, mut lead) = (0i32, 0usize, None);
    let mut prev: Option<char> = None;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ if depth == 0 && seps.contains(&c) && i > start && prev != Some('^') => {
                out.push((lead, &s[start..i]));
                lead = Some(c);
                start = i + c.len_utf8();
            }
            _ => {}
        }
        prev = Some(c);
    }
    out.push((lead, &s[start..]));
    out
}

fn parse_terms(t: &FieldTower, level: Level, s: &str) -> Result<Elem> {
    let f = t.field(level);
    let sym = symbol(level).unwrap();
    let sub = lower(level);
    let root = t.from_coords(level, &{
        let mut c = vec![0; t.level_degree(level) as usize];
        c[1] = 1;
        c
    })?;
    let mut acc = 0u32;
    for (sep, term) in split_top_level(s, &['+', '-']) {
        let (neg, term) = match term.strip_prefix('-') {
            Some(rest) => (sep != Some('-'), rest),
            None => (sep == Some('-'), term),
        };
        if term.is_empty() {
            return Err(Error::Parse(format!("empty term in {s:?}")));
        }
        let (coef_str, power) = match find_symbol(term, sym) {
            Some(pos) => {
                let after = &term[pos + sym.len_utf8()..];
                let power: u64 = if after.is_empty() {
                    1
                } else {
                    after
                        .strip_prefix('^')
                        .and_then(|k| k.parse().ok())
                        .ok_or_else(|| Error::Parse(format!("bad exponent in {term:?}")))?
                };
                (term[..pos].trim_end_matches('*'), power)
            }
            None => (term, 0),
        };
        let coef = if coef_str.is_empty() {
            1
        } else {
            let stripped = coef_str
                .strip_prefix('(')
                .and_then(|x| x.strip_suffix(')'))
                .unwrap_or(coef_str);
            parse(t, sub, stripped)?.value
        };
        let mut v = f.mul(coef, f.pow(root.value, power));
        if neg {
            v = f.neg(v);
        }
        acc = f.add(acc, v);
    }
    Ok(Elem::new(level, acc))
}

fn find_symbol(term: &str, sym: char) -> Option<usize> {
    let mut depth = 0i32;
    let mut found = None;
    for (i, c) in term.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ if c == sym && depth == 0 => found = Some(i),
            _ => {}
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f25_forms() {
        let t = FieldTower::new(5, 1, 2).unwrap();
        let e = t.parse(Level::Top, "2+1u").unwrap();
        assert_eq!(e.value, 2 + 5);
        assert_eq!(t.format(e), "2+1u");
        assert_eq!(t.format_bracket(e), "[2,1]");
        for s in ["[2,1]", "2 + u", "u+2", "2+1*u", "7+6u", "2-4u", "-3+u"] {
            assert_eq!(t.parse(Level::Top, s).unwrap(), e, "{s}");
        }
        // u^2 = 2
        assert_eq!(t.parse(Level::Top, "u^2").unwrap().value, 2);
        assert_eq!(t.format(Elem::new(Level::Mid, 3)), "3");
        assert!(t.parse(Level::Top, "2+xu").is_err());
        assert!(t.parse(Level::Top, "").is_err());
    }

    #[test]
    fn nested_forms_round_trip() {
        let t = FieldTower::new(3, 2, 2).unwrap();
        for v in 0..t.top().order() {
            let e = Elem::new(Level::Top, v);
            assert_eq!(t.parse(Level::Top, &t.format(e)).unwrap(), e);
            assert_eq!(t.parse(Level::Top, &t.format_bracket(e)).unwrap(), e);
        }
        for v in 0..9 {
            let e = Elem::new(Level::Mid, v);
            assert_eq!(t.parse(Level::Mid, &t.format(e)).unwrap(), e);
        }
    }
}
