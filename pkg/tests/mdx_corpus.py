"""Golden query corpus: 45 grammar-valid texts and 23 invalid texts with
the line/column each error must be reported at."""

VALID = [
    "SELECT [Measures].[Cost] ON COLUMNS FROM [Cancer]",
    "SELECT [Measures].[Quantity] ON COLUMNS FROM [Cancer]",
    "select [measures].[cost] on columns from [cancer]",
    "SELECT {[Measures].[Cost], [Measures].[Quantity]} ON COLUMNS FROM [Cancer]",
    "SELECT [Measures].[Cost] ON COLUMNS, [DimPatient].[HioLaw].MEMBERS ON ROWS FROM [Cancer]",
    "SELECT [Measures].[Cost] ON COLUMNS, [DimPatient].[Gender].Members ON ROWS FROM [Cancer]",
    "SELECT [Measures].[Cost] ON COLUMNS, [DimPatient].[AgeBand].Members ON ROWS FROM [Cancer]",
    "SELECT NON EMPTY [DimPatient].[Gender].Members ON COLUMNS FROM [Cancer]",
    "SELECT NON EMPTY [Measures].[Cost] ON COLUMNS, NON EMPTY [DimTreatment].[Therapy].[TreatmentKind].Members ON ROWS FROM [Cancer]",
    "SELECT [DiagnoseDate].[Calendar].[2010].Children ON COLUMNS FROM [Cancer]",
    "SELECT {([DiagnoseDate].[Calendar].[2010].Children)} ON COLUMNS FROM [Cancer] WHERE [DimPatient].[Gender].[Female]",
    "SELECT [Measures].[Cost] ON COLUMNS, [DiagnoseDate].[Calendar].[Year].Members ON ROWS FROM [Cancer]",
    "SELECT [Measures].[Cost] ON COLUMNS, [DiagnoseDate].[Calendar].[Quarter].Members ON ROWS FROM [Cancer]",
    "SELECT [Measures].[Cost] ON COLUMNS, [DiagnoseDate].[Calendar].[Month].Members ON ROWS FROM [Cancer]",
    "SELECT [Measures].[Quantity] ON COLUMNS, [ProID].[ByType].[ProcedureType].Members ON ROWS FROM [Cancer]",
    "SELECT [Measures].[Quantity] ON COLUMNS, [DimProcedure].[ByType].[Procedure].Members ON ROWS FROM [Cancer]",
    "SELECT CROSSJOIN([DimPatient].[Gender].Members, [Measures].[Cost]) ON COLUMNS FROM [Cancer]",
    "SELECT CROSSJOIN([DimPatient].[Gender].Members, CROSSJOIN([DimTreatment].[Therapy].[TreatmentKind].Members, [Measures].[Cost])) ON COLUMNS FROM [Cancer]",
    "SELECT [Measures].[Cost] ON COLUMNS, CROSSJOIN([DiagnoseDate].[Calendar].[Year].Members, [DimPatient].[Gender].Members) ON ROWS FROM [Cancer]",
    "SELECT [Measures].[Cost] ON COLUMNS FROM [Cancer] WHERE [DimPatient].[Gender].[Female]",
    "SELECT [Measures].[Cost] ON COLUMNS FROM [Cancer] WHERE ([DimPatient].[Gender].[Male], [DiagnoseDate].[Calendar].[2011])",
    "SELECT [Measures].[Cost] ON COLUMNS FROM [Cancer] WHERE ([TrID].[Therapy].[Lung Cancer].[Chemotherapy])",
    "SELECT ([DimPatient].[Gender].[Female], [Measures].[Cost]) ON COLUMNS FROM [Cancer]",
    "SELECT {([DimPatient].[Gender].[Female], [Measures].[Cost]), ([DimPatient].[Gender].[Male], [Measures].[Cost])} ON COLUMNS FROM [Cancer]",
    "SELECT [DimPatient].[HioLaw].[Law 32 Employees] ON COLUMNS FROM [Cancer]",
    "SELECT {[DimPatient].[HioLaw].[Law 32 Employees], [DimPatient].[HioLaw].[Law 99 Students]} ON COLUMNS FROM [Cancer]",
    "SELECT [DimTreatment].[Therapy].[Lung Cancer].Children ON ROWS, [Measures].[Cost] ON COLUMNS FROM [Cancer]",
    "SELECT [Measures].[Cost] ON COLUMNS, [TreatmentDate].[Calendar].[Year].Members ON ROWS FROM [Cancer]",
    "SELECT [Measures].[Cost] ON COLUMNS, [ProcedureDate].[Calendar].[2009].Children ON ROWS FROM [Cancer]",
    "SELECT [Measures].[Cost] ON COLUMNS, {[DiagnoseDate].[Calendar].[2009], [DiagnoseDate].[Calendar].[2010]} ON ROWS FROM [Cancer]",
    "SELECT [A]]B] ON COLUMNS FROM [Cancer]",
    "SELECT [Measures].[Cost] ON COLUMNS FROM [My ]] Cube]",
    "SELECT [HIO Law with spaces] ON COLUMNS FROM [Cancer]",
    "SELECT\n  [Measures].[Cost] ON COLUMNS,\n  [DimPatient].[Gender].Members ON ROWS\nFROM [Cancer]",
    "SELECT [Measures].[Cost] ON COLUMNS, NON EMPTY CROSSJOIN([DimPatient].[HioLaw].Members, [DiagnoseDate].[Calendar].[Year].Members) ON ROWS FROM [Cancer]",
    "SELECT {CROSSJOIN([DimPatient].[Gender].Members, [Measures].[Cost])} ON COLUMNS FROM [Cancer]",
    "SELECT {[DimPatient].[Gender].Members, [DimPatient].[Gender].[Female]} ON COLUMNS FROM [Cancer]",
    "SELECT ([DiagnoseDate].[Calendar].[2010].[2010-Q1]) ON COLUMNS FROM [Cancer]",
    "SELECT [DiagnoseDate].[Calendar].[2010].[2010-Q1].[2010-01].Children ON COLUMNS FROM [Cancer]",
    "SELECT [Measures].[Cost] ON COLUMNS, [PaID].[HioLaw].Members ON ROWS FROM [Cancer]",
    "SELECT [Measures].[Cost] ON COLUMNS, [DimPatient].[Gender].[Gender].Members ON ROWS FROM [Cancer]",
    "SELECT [Measures].[Cost] ON COLUMNS, [DimDate].[Calendar].[Year].Members ON ROWS FROM [Cancer]",
    "SELECT [DimPatient].[Gender].Members ON ROWS, [Measures].[Cost] ON COLUMNS FROM [Cancer]",
    "SELECT {[Measures].[Cost]} ON COLUMNS, {([DiagnoseDate].[Calendar].[Year].Members)} ON ROWS FROM [Cancer]",
    "SELECT [Measures].[Cost] ON COLUMNS FROM [Cancer] WHERE ([Measures].[Quantity])",
]

# (query text, expected line, expected column)
INVALID = [
    ("", 1, 1),
    ("SELECT", 1, 7),
    ("SELECT FROM [Cancer]", 1, 8),
    ("SELECT [A] COLUMNS FROM [C]", 1, 12),
    ("SELECT [A] ON COLS FROM [C]", 1, 15),
    ("SELECT [A] ON COLUMNS [C]", 1, 23),
    ("SELECT [A] ON COLUMNS FROM Cancer", 1, 28),
    ("SELECT [A] ON COLUMNS FROM [Cancer", 1, 28),
    ("SELECT [B. ON COLUMNS FROM C", 1, 8),
    ("SELECT {[A], } ON COLUMNS FROM [C]", 1, 14),
    ("SELECT ([A],) ON COLUMNS FROM [C]", 1, 13),
    ("SELECT [A] ON COLUMNS, [B] ON COLUMNS FROM [C]", 1, 31),
    ("SELECT [A] ON ROWS FROM [C]", 1, 15),
    ("SELECT [A] ON ROWS, [B] ON ROWS FROM [C]", 1, 28),
    ("SELECT [A] ON COLUMNS FROM [C] WHERE", 1, 37),
    ("SELECT [A] ON COLUMNS FROM [C] [D]", 1, 32),
    ("SELECT CROSSJOIN([A].Members) ON COLUMNS FROM [C]", 1, 29),
    ("SELECT CROSSJOIN([A].Members, ) ON COLUMNS FROM [C]", 1, 31),
    ("SELECT [A]..Members ON COLUMNS FROM [C]", 1, 11),
    ("SELECT 42 ON COLUMNS FROM [C]", 1, 8),
    ("SELECT [A] ON COLUMNS FROM [C] WHERE ([B]", 1, 42),
    ("SELECT NON [A].Members ON COLUMNS FROM [C]", 1, 12),
    ("SELECT [Measures].[Cost] ON COLUMNS,\n[Foo] ON COLUMNS FROM [C]", 2, 10),
    ("SELECT [A] ON COLUMNS FROM [C] WHERE [B] [X]", 1, 42),
]
