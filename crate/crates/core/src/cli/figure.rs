//! Lattice-dot diagrams of a rank-2 semigroup: members filled, holes
//! hollow, roots marked.

use std::collections::BTreeSet;
use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::cone::IntBox;
use crate::lattice::LatticeVector;
use crate::roots::{roots_in_box, RootError};
use crate::semigroup::AffineSemigroup;

pub const MAX_AREA: u64 = 10_000;
pub const CELL: i64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Svg,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FigureError {
    NotPlanar(usize),
    TooLarge(BigInt),
    Root(RootError),
}

impl std::fmt::Display for FigureError {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        match self {
            FigureError::NotPlanar(d) => write!(f, "figures need rank 2, got {d}"),
            FigureError::TooLarge(a) => write!(f, "box has {a} points, limit is {MAX_AREA}"),
            FigureError::Root(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marker {
    Member,
    Hole,
    Root,
    Blank,
}

pub struct FigureSpec {
    pub bx: IntBox,
    pub format: Format,
}

pub struct Layers {
    pub members: BTreeSet<LatticeVector>,
    pub holes: BTreeSet<LatticeVector>,
    pub roots: BTreeSet<LatticeVector>,
}

impl Layers {
    pub fn marker(&self, p: &LatticeVector) -> Marker {
        if self.roots.contains(p) {
            Marker::Root
        } else if self.holes.contains(p) {
            Marker::Hole
        } else if self.members.contains(p) {
            Marker::Member
        } else {
            Marker::Blank
        }
    }
}

fn bounds(bx: &IntBox) -> (i64, i64, i64, i64) {
    let c = |v: &BigInt| v.to_i64().expect("small box");
    (c(&bx.lo()[0]), c(&bx.hi()[0]), c(&bx.lo()[1]), c(&bx.hi()[1]))
}

pub fn layers(s: &AffineSemigroup, bx: &IntBox) -> Result<Layers, FigureError> {
    if s.dim() != 2 || bx.dim() != 2 {
        return Err(FigureError::NotPlanar(s.dim()));
    }
    if bx.count() > BigInt::from(MAX_AREA) {
        return Err(FigureError::TooLarge(bx.count()));
    }
    let members = bx.points().filter(|p| s.member(p)).collect();
    let holes = s.holes_within(bx).into_iter().collect();
    let roots = roots_in_box(s, bx).map_err(FigureError::Root)?.into_iter().map(|w| w.alpha).collect();
    Ok(Layers { members, holes, roots })
}

pub fn render(s: &AffineSemigroup, spec: &FigureSpec) -> Result<String, FigureError> {
    let l = layers(s, &spec.bx)?;
    Ok(match spec.format {
        Format::Ascii => ascii(&l, &spec.bx),
        Format::Svg => svg(&l, &spec.bx),
    })
}

/// Rows from the top `y` down; `#` member, `o` hole, `*` root, axes on blanks.
fn ascii(l: &Layers, bx: &IntBox) -> String {
    let (x0, x1, y0, y1) = bounds(bx);
    let mut out = String::new();
    for y in (y0..=y1).rev() {
        let _ = write!(out, "{y:>4} ");
        for x in x0..=x1 {
            let c = match l.marker(&LatticeVector::from_i64s(&[x, y])) {
                Marker::Member => '#',
                Marker::Hole => 'o',
                Marker::Root => '*',
                Marker::Blank if x == 0 && y == 0 => '+',
                Marker::Blank if x == 0 => '|',
                Marker::Blank if y == 0 => '-',
                Marker::Blank => '.',
            };
            out.push(c);
            if x < x1 {
                out.push(' ');
            }
        }
        out.push('\n');
    }
    out.push_str("     ");
    let labels: Vec<String> = (x0..=x1).map(|x| format!("{}", (x % 10).abs())).collect();
    out.push_str(&labels.join(" "));
    out.push('\n');
    out
}

fn svg(l: &Layers, bx: &IntBox) -> String {
    let (x0, x1, y0, y1) = bounds(bx);
    let w = (x1 - x0 + 2) * CELL;
    let h = (y1 - y0 + 2) * CELL;
    let px = |x: i64| (x - x0 + 1) * CELL;
    let py = |y: i64| (y1 - y + 1) * CELL;
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    out.push_str(
        "<style>.axis{stroke:#999;stroke-width:0.5}.member{fill:black}.hole{fill:none;stroke:black;stroke-width:0.8}.root{fill:#2a2}</style>\n",
    );
    if (x0..=x1).contains(&0) {
        let _ = writeln!(out, r#"<line class="axis" x1="{0}" y1="{1}" x2="{0}" y2="{2}"/>"#, px(0), py(y1), py(y0));
    }
    if (y0..=y1).contains(&0) {
        let _ = writeln!(out, r#"<line class="axis" x1="{1}" y1="{0}" x2="{2}" y2="{0}"/>"#, py(0), px(x0), px(x1));
    }
    for y in (y0..=y1).rev() {
        for x in x0..=x1 {
            let class = match l.marker(&LatticeVector::from_i64s(&[x, y])) {
                Marker::Member => "member",
                Marker::Hole => "hole",
                Marker::Root => "root",
                Marker::Blank => continue,
            };
            let _ = writeln!(out, r#"<circle class="{class}" cx="{}" cy="{}" r="3" data-x="{x}" data-y="{y}"/>"#, px(x), py(y));
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Cone;
    use crate::semigroup::APFamily;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64s(c)
    }

    #[test]
    fn figure_one_pattern() {
        let c = Cone::from_generators(&[lv(&[1, 0]), lv(&[1, 2])], 2).unwrap();
        let s = AffineSemigroup::hole_patched(c, vec![], vec![APFamily::new(lv(&[1, 2]), lv(&[2, 4])).unwrap()]).unwrap();
        let bx = IntBox::from_bounds(&[(-1, 7), (-1, 7)]).unwrap();
        let l = layers(&s, &bx).unwrap();
        assert_eq!(l.holes.iter().cloned().collect::<Vec<_>>(), vec![lv(&[1, 2]), lv(&[3, 6])]);
        let text = render(&s, &FigureSpec { bx, format: Format::Ascii }).unwrap();
        let row = text.lines().find(|r| r.starts_with("  -1")).unwrap();
        assert_eq!(row, "  -1 . * * * * * * * *");
    }

    #[test]
    fn empty_window_has_axes() {
        let s = AffineSemigroup::saturated(Cone::orthant(2)).unwrap();
        let bx = IntBox::from_bounds(&[(-3, 0), (-4, -2)]).unwrap();
        let text = render(&s, &FigureSpec { bx, format: Format::Ascii }).unwrap();
        let rows: Vec<&str> = text.lines().take(3).collect();
        assert!(rows.iter().all(|r| r[5..] == *". . . |"), "{text}");
        let big = IntBox::cube(2, 60);
        assert!(matches!(layers(&s, &big), Err(FigureError::TooLarge(_))));
    }
}
