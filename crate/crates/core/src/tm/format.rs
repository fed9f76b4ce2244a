//! Machine description files.
//!
//! ```text
//! name = parity
//! deterministic = true
//! states = A B C acc rej
//! alphabet = L b c0 c1
//! input = 0:c0 1:c1
//! left = L
//! blank = b
//! initial = A
//! accept = acc
//! reject = rej
//!
//! [rules]
//! A c0 -> A c0 RIGHT
//! ```

use super::{Rule, TMSpec, TmError};

fn err(line: usize, message: impl Into<String>) -> TmError {
    TmError::Format {
        line,
        message: message.into(),
    }
}

fn parse_rule(n: usize, line: &str) -> Result<Rule, TmError> {
    let (lhs, rhs) = line
        .split_once("->")
        .ok_or_else(|| err(n, format!("expected `t read -> u write MOVE`, found `{line}`")))?;
    let l: Vec<&str> = lhs.split_whitespace().collect();
    let r: Vec<&str> = rhs.split_whitespace().collect();
    let ([t, b], [u, c, p]) = (l.as_slice(), r.as_slice()) else {
        return Err(err(n, format!("expected `t read -> u write MOVE`, found `{line}`")));
    };
    let mv = p.parse().map_err(|e: String| err(n, e))?;
    Ok(Rule::new(t, b, u, c, mv))
}

pub fn parse_tmspec(text: &str) -> Result<TMSpec, TmError> {
    let mut keys: Vec<(usize, String, String)> = Vec::new();
    let mut rules = Vec::new();
    let mut in_rules = false;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "[rules]" {
            if in_rules {
                return Err(err(n, "second [rules] section"));
            }
            in_rules = true;
        } else if in_rules {
            rules.push(parse_rule(n, line)?);
        } else {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| err(n, format!("expected `key = value`, found `{line}`")))?;
            let k = k.trim().to_string();
            if keys.iter().any(|(_, x, _)| *x == k) {
                return Err(err(n, format!("`{k}` given twice")));
            }
            keys.push((n, k, v.trim().to_string()));
        }
    }
    let last = text.lines().count().max(1);
    for (n, k, _) in &keys {
        let known = [
            "name", "deterministic", "states", "alphabet", "input", "left", "blank", "initial", "accept", "reject",
        ];
        if !known.contains(&k.as_str()) {
            return Err(err(*n, format!("unknown key `{k}`")));
        }
    }
    let get = |k: &str| keys.iter().find(|(_, x, _)| x == k).map(|(n, _, v)| (*n, v.clone()));
    let need = |k: &str| get(k).ok_or_else(|| err(last, format!("missing `{k}`")));
    let list = |k: &str| -> Result<Vec<String>, TmError> {
        Ok(need(k)?.1.split_whitespace().map(str::to_string).collect())
    };
    let deterministic = match get("deterministic") {
        None => true,
        Some((n, v)) => v
            .parse()
            .map_err(|_| err(n, format!("`deterministic` must be true or false, found `{v}`")))?,
    };
    let (input_line, input_text) = need("input")?;
    let mut input = Vec::new();
    for item in input_text.split_whitespace() {
        let (l, s) = item
            .split_once(':')
            .ok_or_else(|| err(input_line, format!("expected letter:symbol, found `{item}`")))?;
        let mut cs = l.chars();
        let (Some(ch), None) = (cs.next(), cs.next()) else {
            return Err(err(input_line, format!("`{l}` is not a single letter")));
        };
        input.push((ch, s.to_string()));
    }
    if !in_rules {
        return Err(err(last, "missing [rules] section"));
    }
    Ok(TMSpec {
        name: get("name").map(|(_, v)| v).unwrap_or_default(),
        states: list("states")?,
        alphabet: list("alphabet")?,
        input,
        left_end: need("left")?.1,
        blank: need("blank")?.1,
        rules,
        initial: need("initial")?.1,
        accept: need("accept")?.1,
        reject: get("reject").map(|(_, v)| v),
        deterministic,
    })
}

pub fn write_tmspec(spec: &TMSpec) -> String {
    let input: Vec<String> = spec.input.iter().map(|(l, s)| format!("{l}:{s}")).collect();
    let mut out = String::new();
    if !spec.name.is_empty() {
        out += &format!("name = {}\n", spec.name);
    }
    out += &format!("deterministic = {}\n", spec.deterministic);
    out += &format!("states = {}\n", spec.states.join(" "));
    out += &format!("alphabet = {}\n", spec.alphabet.join(" "));
    out += &format!("input = {}\n", input.join(" "));
    out += &format!("left = {}\nblank = {}\n", spec.left_end, spec.blank);
    out += &format!("initial = {}\naccept = {}\n", spec.initial, spec.accept);
    if let Some(r) = &spec.reject {
        out += &format!("reject = {r}\n");
    }
    out += "\n[rules]\n";
    for r in &spec.rules {
        out += &format!("{r}\n");
    }
    out
}
