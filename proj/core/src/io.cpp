namespace casdev {}
