use planeloc::concat_queue::{Handle, QueueArena};
use planeloc::union_find::DisjointSets;
use proptest::prelude::*;

type Model = Vec<Vec<(u32, Handle)>>;

fn check(arena: &QueueArena<u32>, model: &Model) {
    for q in model {
        let items: Vec<u32> = arena.items(q[0].1).unwrap().into_iter().copied().collect();
        let want: Vec<u32> = q.iter().map(|(v, _)| *v).collect();
        assert_eq!(items, want);
        assert!(arena.validate(q[0].1).unwrap());
        let bound = 1.45 * ((q.len() + 2) as f64).log2() + 1.0;
        assert!(q.iter().all(|(_, h)| arena.depth(*h).unwrap() as f64 <= bound));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn queues_behave_like_vectors(ops in prop::collection::vec((0u8..4, any::<usize>(), any::<usize>()), 1..200)) {
        let mut arena: QueueArena<u32> = QueueArena::new();
        let mut model: Model = Vec::new();
        let mut next = 0u32;
        for (kind, x, y) in ops {
            match kind {
                0 if model.len() < 2 || x % 3 == 0 => {
                    let h = arena.singleton(next);
                    model.push(vec![(next, h)]);
                    next += 1;
                }
                0 => {
                    let i = x % model.len();
                    let mut j = y % model.len();
                    if i == j {
                        j = (j + 1) % model.len();
                    }
                    arena.concat(model[i][0].1, model[j][0].1).unwrap();
                    let tail = std::mem::take(&mut model[j]);
                    model[i].extend(tail);
                    model.remove(j);
                }
                1 if !model.is_empty() => {
                    let i = x % model.len();
                    let k = y % model[i].len();
                    let (_, right) = arena.split_after(model[i][k].1).unwrap();
                    if right.is_some() {
                        let tail = model[i].split_off(k + 1);
                        model.push(tail);
                    }
                }
                2 if !model.is_empty() => {
                    let i = x % model.len();
                    let k = y % model[i].len();
                    let h = arena.insert_after(model[i][k].1, next).unwrap();
                    model[i].insert(k + 1, (next, h));
                    next += 1;
                }
                3 if !model.is_empty() => {
                    let i = x % model.len();
                    let k = y % model[i].len();
                    let (v, _) = arena.remove(model[i][k].1).unwrap();
                    prop_assert_eq!(v, model[i][k].0);
                    model[i].remove(k);
                    if model[i].is_empty() {
                        model.remove(i);
                    }
                }
                _ => {}
            }
            check(&arena, &model);
        }
    }

    #[test]
    fn disjoint_sets_match_relabelling(m in 1usize..60, unions in prop::collection::vec((any::<usize>(), any::<usize>()), 0..80)) {
        let mut sets = DisjointSets::new(m);
        let mut label: Vec<usize> = (0..=m).collect();
        for (x, y) in unions {
            let (x, y) = (x % m + 1, y % m + 1);
            let root = sets.union(x, y).unwrap();
            let (lx, ly) = (label[x], label[y]);
            for l in label.iter_mut() {
                if *l == ly {
                    *l = lx;
                }
            }
            prop_assert!(sets.same_set(root, x).unwrap());
            let distinct: std::collections::BTreeSet<usize> = label[1..].iter().copied().collect();
            prop_assert_eq!(sets.set_count(), distinct.len());
        }
        for a in 1..=m {
            for b in 1..=m {
                prop_assert_eq!(sets.find_readonly(a).unwrap() == sets.find_readonly(b).unwrap(), label[a] == label[b]);
            }
        }
    }
}
