from bifuzzy.cli import main_entry

main_entry()
