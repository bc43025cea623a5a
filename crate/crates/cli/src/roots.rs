//! Root lists for `norms --roots`.
//!
//! Accepted forms, inline or as file contents: a JSON array of `[x, y]` pairs,
//! `x,y;x,y;...`, or one `x y` (or `x,y`) pair per line.

use std::path::Path;

use turanlab::PlanePoint;

pub fn parse_roots(arg: &str) -> Result<Vec<PlanePoint>, String> {
    let text = if Path::new(arg).is_file() {
        std::fs::read_to_string(arg).map_err(|e| format!("{arg}: {e}"))?
    } else {
        arg.to_string()
    };
    let t = text.trim();
    if t.starts_with('[') {
        let pairs: Vec<[f64; 2]> = serde_json::from_str(t).map_err(|e| e.to_string())?;
        return Ok(pairs.into_iter().map(|[x, y]| PlanePoint::new(x, y)).collect());
    }
    t.split([';', '\n'])
        .map(str::trim)
        .filter(|s| !s.is_empty() && !s.starts_with('#'))
        .map(|item| {
            let parts: Vec<&str> = item
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            match parts.as_slice() {
                [x, y] => {
                    let x: f64 = x.parse().map_err(|_| format!("bad number {x:?}"))?;
                    let y: f64 = y.parse().map_err(|_| format!("bad number {y:?}"))?;
                    Ok(PlanePoint::new(x, y))
                }
                _ => Err(format!("expected `x,y`, got {item:?}")),
            }
        })
        .collect()
}
