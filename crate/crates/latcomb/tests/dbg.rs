#[test]
fn dbg_l_shape() {
    use latcomb::grid::{Rect, RectPolygon};
    use std::collections::BTreeSet;
    let rp = RectPolygon::new(vec![
        Rect::new(0, 0, 239, 109).unwrap(),
        Rect::new(0, 110, 109, 239).unwrap(),
    ])
    .unwrap();
    match latcomb::markers::subdivide_no4(&rp, 8, 1, 2, &BTreeSet::new(), 4) {
        Ok((rects, _)) => println!("OK {} rects", rects.len()),
        Err(e) => println!("ERR {e}"),
    }
}
