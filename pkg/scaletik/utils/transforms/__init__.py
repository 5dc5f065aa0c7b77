from scaletik.utils.transforms.tables import emit_tables, json_dumps_formatted
