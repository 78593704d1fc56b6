use super::Formula;

const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const RHD: u8 = 3;
const OR: u8 = 4;
const AND: u8 = 5;
const UNARY: u8 = 6;
const ATOMIC: u8 = 7;

/// Print with derived connectives recognised and minimal parentheses.
pub fn render(f: &Formula) -> String {
    go(f).0
}

fn at_least(f: &Formula, min: u8) -> String {
    let (text, prec) = go(f);
    if prec >= min {
        text
    } else {
        format!("({text})")
    }
}

fn binary(a: &Formula, op: &str, b: &Formula, prec: u8, left: u8, right: u8) -> (String, u8) {
    (
        format!("{} {op} {}", at_least(a, left), at_least(b, right)),
        prec,
    )
}

fn go(f: &Formula) -> (String, u8) {
    if f.as_top() {
        return ("top".into(), ATOMIC);
    }
    if let Some(a) = f.as_diamond() {
        return (format!("<>{}", at_least(a, UNARY)), UNARY);
    }
    if let Some((a, b)) = f.as_iff() {
        return binary(a, "<->", b, IFF, IFF + 1, IFF + 1);
    }
    if let Some((a, b)) = f.as_and() {
        return binary(a, "&", b, AND, AND, AND + 1);
    }
    if let Some(a) = f.as_not() {
        return (format!("~{}", at_least(a, UNARY)), UNARY);
    }
    if let Some((a, b)) = f.as_or() {
        return binary(a, "|", b, OR, OR, OR + 1);
    }
    match f {
        Formula::Bot => ("bot".into(), ATOMIC),
        Formula::Atom(name) => (name.to_string(), ATOMIC),
        Formula::Box(a) => (format!("[]{}", at_least(a, UNARY)), UNARY),
        Formula::Implies(a, b) => binary(a, "->", b, IMPLIES, IMPLIES + 1, IMPLIES),
        Formula::Rhd(a, b) => binary(a, "|>", b, RHD, RHD + 1, RHD + 1),
    }
}
