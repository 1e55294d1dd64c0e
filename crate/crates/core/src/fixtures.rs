use crate::fd::{parse_fds, FdSet};
use crate::table::Table;

pub const OFFICE_CSV: &str = "\
id,facility,room,floor,city,weight
1,HQ,322,3,Paris,2
2,HQ,322,30,Madrid,1
3,HQ,122,1,Madrid,1
4,Lab1,B35,3,London,2
";

pub fn office_table() -> Table {
    Table::from_csv(OFFICE_CSV).unwrap()
}

pub fn office_fds() -> FdSet {
    parse_fds(
        "facility -> city\nfacility, room -> floor",
        &["facility", "room", "floor", "city"],
    )
    .unwrap()
}

pub fn fds(text: &str) -> FdSet {
    let schema = crate::fd::infer_schema(text).unwrap();
    parse_fds(text, &schema).unwrap()
}
