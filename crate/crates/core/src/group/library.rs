use super::table::FiniteGroupTable;

/// Named small groups: cyclic, dihedral, quaternion, `A4`, `S3` and a
/// selection of direct products, restricted to order at most `max_order`.
pub fn group_library(max_order: usize) -> Vec<(String, FiniteGroupTable)> {
    fn z(n: usize) -> FiniteGroupTable {
        FiniteGroupTable::cyclic(n)
    }
    let mut out: Vec<(String, FiniteGroupTable)> = Vec::new();
    for n in 1..=max_order.min(64) {
        out.push((format!("Z{n}"), z(n)));
    }
    for n in 2..=max_order / 2 {
        out.push((format!("D{n}"), FiniteGroupTable::dihedral(n)));
    }
    if max_order >= 6 {
        out.push(("S3".into(), FiniteGroupTable::symmetric(3)));
    }
    if max_order >= 8 {
        out.push(("Q8".into(), FiniteGroupTable::quaternion()));
    }
    if max_order >= 12 {
        out.push(("A4".into(), FiniteGroupTable::alternating(4)));
    }
    let products: [(&str, fn() -> FiniteGroupTable); 12] = [
        ("Z2xZ2", || FiniteGroupTable::direct_product(&z(2), &z(2))),
        ("Z2xZ4", || FiniteGroupTable::direct_product(&z(2), &z(4))),
        ("Z2xZ2xZ2", || FiniteGroupTable::elementary_abelian_2(3)),
        ("Z3xZ3", || FiniteGroupTable::direct_product(&z(3), &z(3))),
        ("Z2xZ6", || FiniteGroupTable::direct_product(&z(2), &z(6))),
        ("Z2xS3", || FiniteGroupTable::direct_product(&z(2), &FiniteGroupTable::symmetric(3))),
        ("Z2xZ8", || FiniteGroupTable::direct_product(&z(2), &z(8))),
        ("Z4xZ4", || FiniteGroupTable::direct_product(&z(4), &z(4))),
        ("Z2xZ2xZ4", || FiniteGroupTable::direct_product(&FiniteGroupTable::elementary_abelian_2(2), &z(4))),
        ("Z2^4", || FiniteGroupTable::elementary_abelian_2(4)),
        ("Z2xD4", || FiniteGroupTable::direct_product(&z(2), &FiniteGroupTable::dihedral(4))),
        ("Z2xQ8", || FiniteGroupTable::direct_product(&z(2), &FiniteGroupTable::quaternion())),
    ];
    for (name, build) in products {
        let g = build();
        if g.order() <= max_order {
            out.push((name.into(), g));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_orders() {
        let lib = group_library(16);
        assert!(lib.iter().all(|(_, g)| g.order() <= 16));
        let names: Vec<&str> = lib.iter().map(|(n, _)| n.as_str()).collect();
        for expected in ["Z16", "D8", "Q8", "A4", "S3", "Z2^4", "Z2xQ8"] {
            assert!(names.contains(&expected), "{expected}");
        }
    }
}
