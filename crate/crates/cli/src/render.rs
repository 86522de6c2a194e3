//! Aligned text tables.

use opchar::exactsym::{Partition, SymFunc};
use opchar::graphzoo::GraphClass;
use opchar::hlaurent::HLaurent;
use opchar::moduli::QSeries;
use opchar::rational::{fmt_rational, Rational};

/// Left-aligns every column but the last, which is right-aligned.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate().take(cols) {
            width[i] = width[i].max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let mut s = String::new();
        for (i, c) in cells.iter().enumerate() {
            let pad = width[i] - c.chars().count();
            if i + 1 == cols {
                s += &" ".repeat(pad);
                s += c;
            } else {
                s += c;
                s += &" ".repeat(pad + 2);
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    out += &line(width.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().iter().map(|s| s.as_str()).collect());
    for r in rows {
        out += &line(r.iter().map(|s| s.as_str()).collect());
    }
    out
}

pub fn partition(p: &Partition) -> String {
    let parts: Vec<String> = p.parts().iter().map(|x| x.to_string()).collect();
    format!("p[{}]", parts.join(","))
}

pub fn hbar(h2: i32) -> String {
    if h2 % 2 == 0 {
        format!("hbar^{}", h2 / 2)
    } else {
        format!("hbar^({h2}/2)")
    }
}

pub fn symfunc(f: &SymFunc) -> String {
    let rows: Vec<Vec<String>> =
        f.iter().map(|(p, c)| vec![p.weight().to_string(), partition(p), fmt_rational(c)]).collect();
    table(&["weight", "monomial", "coefficient"], &rows)
}

pub fn hlaurent(f: &HLaurent) -> String {
    let mut terms: Vec<_> = f.iter().collect();
    terms.sort_by(|a, b| a.0.weight().cmp(&b.0.weight()).then_with(|| a.0.cmp(b.0)));
    let rows: Vec<Vec<String>> = terms
        .into_iter()
        .map(|(k, c)| {
            let mut mono = partition(&k.p);
            if !k.q.is_empty() {
                mono += &format!(" q[{}]", k.q.parts().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
            }
            vec![k.weight().to_string(), hbar(k.h2), mono, fmt_rational(c)]
        })
        .collect();
    table(&["weight", "hbar", "monomial", "coefficient"], &rows)
}

/// One row per power of `ħ` (and of the auxiliary variable, if any).
pub fn qseries(s: &QSeries) -> String {
    let aux = s.aux().name();
    let rows: Vec<Vec<String>> = s
        .terms()
        .iter()
        .map(|(&(h2, d), c)| {
            let mut r = vec![hbar(h2)];
            if !aux.is_empty() {
                r.push(format!("{aux}^{d}"));
            }
            r.push(fmt_rational(c));
            r
        })
        .collect();
    if aux.is_empty() {
        table(&["power", "coefficient"], &rows)
    } else {
        table(&["power", "aux", "coefficient"], &rows)
    }
}

pub fn graph_classes(classes: &[GraphClass]) -> String {
    let rows: Vec<Vec<String>> = classes
        .iter()
        .map(|c| {
            vec![
                c.canon.key_hex(),
                c.graph.num_vertices().to_string(),
                c.graph.num_edges().to_string(),
                format!("{:?}", c.graph.vertex_genus()),
                c.aut_order().to_string(),
            ]
        })
        .collect();
    table(&["key", "vertices", "edges", "genera", "aut"], &rows)
}

pub fn keyed_rationals(header: &[&str], rows: impl IntoIterator<Item = (String, Rational)>) -> String {
    let rows: Vec<Vec<String>> = rows.into_iter().map(|(k, v)| vec![k, fmt_rational(&v)]).collect();
    table(header, &rows)
}
